//! Exact quantum homology of closed symplectic manifolds and of Hamiltonian
//! fibrations over the two-sphere, driven by Gromov–Witten tables.

pub mod catalog;
pub mod fixture;
pub mod error;
pub mod expr;
pub mod fibration;
pub mod gw;
pub mod linalg;
pub mod manifold;
pub mod novikov;
pub mod quantum;
pub mod rational;
pub mod report;
pub mod series;
pub mod validator;
