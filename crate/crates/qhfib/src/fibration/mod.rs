//! Hamiltonian fibrations `P → S²` with fiber `M`, given by the homology of
//! `P`, the maps `ι` and `s`, the classes `u_φ`, `c_φ` and two tables of
//! invariants of `P`: fiber classes `ι(B)` and section classes `σ_ref + ι(B)`.

mod checks;
mod product;
mod section;
mod split;

pub use checks::{chi_total, prop_gw_checks, wang_checks, TotalClass};
pub use product::{product_fixture, tensor_checks};
pub use section::{RhoShape, SectionData};
pub use split::{ring_split_check, ring_split_check_with, SplitHypothesis, SplitReport};

use crate::error::{QhError, Result};
use crate::gw::{GWTable, TableKind};
use crate::linalg::{self, Mat};
use crate::manifold::{ManifoldModel, QHClass};
use crate::novikov::Exp;
use crate::quantum::{max_omega, QuantumRing};
use crate::rational::{mod_residue, Q};
use num_bigint::BigInt;
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq)]
pub struct FibrationModel {
    pub name: String,
    pub fiber: ManifoldModel,
    pub fiber_gw: GWTable,
    /// `H_*(P)`; its lattice carries `u_φ` and `c_φ`.
    pub total: ManifoldModel,
    /// Row `a` holds `ι(e_a)`.
    pub iota: Mat,
    /// Row `a` holds `s(e_a)`.
    pub splitting: Mat,
    /// Reference section in the generators of the total lattice.
    pub sigma_ref: Vec<Q>,
    /// Invariants in fiber classes, keyed by `B`.
    pub vertical: GWTable,
    /// Invariants in section classes, keyed by the offset `B` of `σ_ref + ι(B)`.
    pub section: GWTable,
}

/// `n(v₁,…,v_k; b)` extended multilinearly from basis entries.
pub fn multilinear(table: &GWTable, m: &ManifoldModel, vs: &[&[Q]], b: &Exp) -> Result<Q> {
    fn go(table: &GWTable, m: &ManifoldModel, vs: &[&[Q]], b: &Exp, idx: &mut Vec<usize>, c: Q, acc: &mut Q) -> Result<()> {
        if idx.len() == vs.len() {
            *acc += c * table.lookup(m, idx, b)?;
            return Ok(());
        }
        for (i, x) in vs[idx.len()].iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            idx.push(i);
            go(table, m, vs, b, idx, &c * x, acc)?;
            idx.pop();
        }
        Ok(())
    }
    let mut acc = Q::zero();
    go(table, m, vs, b, &mut Vec::new(), Q::one(), &mut acc)?;
    Ok(acc)
}

/// Residue of `c_φ` on a section modulo the minimal Chern number `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChernResidue {
    pub value: BigInt,
    pub modulus: u64,
}

impl std::fmt::Display for ChernResidue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

/// `u_φ(σ)` and `c_φ(σ)` determine `Ī_c`.
pub fn chern_residue(c: &Q, n: u64) -> Result<ChernResidue> {
    let value = mod_residue(c, n).ok_or_else(|| QhError::Malformed(format!("c_φ(σ) = {c} is not an integer")))?;
    Ok(ChernResidue { value, modulus: n })
}

#[derive(Debug, Clone, PartialEq)]
pub enum Nonsqueeze {
    /// Balls of capacity `πr²` embed only if `πr² ≤ bound`.
    Bound(Q),
    None(String),
}

impl FibrationModel {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: impl Into<String>,
        fiber: ManifoldModel,
        fiber_gw: GWTable,
        total: ManifoldModel,
        iota: Mat,
        splitting: Mat,
        sigma_ref: Vec<Q>,
        vertical: GWTable,
        mut section: GWTable,
    ) -> Result<Self> {
        let (m, p) = (fiber.dim(), total.dim());
        if total.n != fiber.n + 1 {
            return Err(QhError::Malformed(format!("total space has n = {}, fiber n = {}", total.n, fiber.n)));
        }
        for (what, mat, shift) in [("iota", &iota, 0), ("splitting", &splitting, 2)] {
            if mat.len() != m || mat.iter().any(|r| r.len() != p) {
                return Err(QhError::Malformed(format!("{what} must have {m} rows of length {p}")));
            }
            for (a, row) in mat.iter().enumerate() {
                if let Some(d) = total.homogeneous_degree(row) {
                    if d != fiber.degree(a) + shift {
                        return Err(QhError::Malformed(format!(
                            "{what}({}) has degree {d}, expected {}",
                            fiber.label(a),
                            fiber.degree(a) + shift
                        )));
                    }
                } else if !linalg::is_zero_vec(row) {
                    return Err(QhError::Malformed(format!("{what}({}) is not homogeneous", fiber.label(a))));
                }
            }
        }
        if sigma_ref.len() != total.h2.rank() {
            return Err(QhError::Malformed("sigma_ref has the wrong number of coordinates".into()));
        }
        if vertical.is_section() {
            return Err(QhError::Malformed("fiber-class table must not be a section table".into()));
        }
        let key = total.h2.key(&sigma_ref);
        section.kind = TableKind::Section { u_ref: key.omega, c_ref: key.chern };
        Ok(FibrationModel {
            name: name.into(),
            fiber,
            fiber_gw,
            total,
            iota,
            splitting,
            sigma_ref,
            vertical,
            section,
        })
    }

    pub fn u_ref(&self) -> Q {
        self.total.h2.key(&self.sigma_ref).omega
    }

    pub fn c_ref(&self) -> Q {
        self.total.h2.key(&self.sigma_ref).chern
    }

    pub fn sigma_ref_label(&self) -> String {
        self.total.h2.format_coords(&self.sigma_ref)
    }

    pub fn iota_of(&self, a: &[Q]) -> Vec<Q> {
        linalg::vec_mat(a, &self.iota)
    }

    pub fn s_of(&self, a: &[Q]) -> Vec<Q> {
        linalg::vec_mat(a, &self.splitting)
    }

    /// The fiber `[M]` as a class in `P`.
    pub fn m_class(&self) -> Vec<Q> {
        self.iota[self.fiber.top].clone()
    }

    /// `x ∩ [M]`, the fiber class `y` with `y · c = x · ι(c)`.
    pub fn cap_fiber(&self, x: &[Q]) -> Vec<Q> {
        let vals: Vec<Q> = self.iota.iter().map(|ic| self.total.intersect(x, ic)).collect();
        self.fiber.solve_left(&vals)
    }

    pub fn iota_class(&self, a: &QHClass) -> QHClass {
        a.map_linear(|v| self.iota_of(v))
    }

    pub fn s_class(&self, a: &QHClass) -> QHClass {
        a.map_linear(|v| self.s_of(v))
    }

    pub fn cap_fiber_class(&self, x: &QHClass) -> QHClass {
        x.map_linear(|v| self.cap_fiber(v))
    }

    pub fn fiber_ring(&self) -> QuantumRing<'_> {
        QuantumRing::new(&self.fiber, &self.fiber_gw)
    }

    /// The vertical part of the quantum product of `P`.
    pub fn vertical_ring(&self) -> QuantumRing<'_> {
        QuantumRing::new(&self.total, &self.vertical)
    }

    pub fn vertical_product(&self, u: &QHClass, v: &QHClass, cutoff: &Q) -> Result<QHClass> {
        self.vertical_ring().product(u, v, cutoff)
    }

    /// `u *_{H,σ} v` for `σ = σ_ref + ι(C)`: `(u *_H v)·w = Σ_K n_P(u,v,w; σ_ref + K) e^{C−K}`.
    pub fn horizontal_product(&self, u: &QHClass, v: &QHClass, offset: &Exp, cutoff: &Q) -> Result<QHClass> {
        let level = self.u_ref() + &offset.omega + cutoff + max_omega(u) + max_omega(v);
        self.section.require(3, &level)?;
        let d = self.total.dim();
        let mut out = QHClass::zero();
        for k in self.section.classes(3) {
            if self.section.energy(&k) > level {
                continue;
            }
            for (eu, vu) in &u.terms {
                for (ev, vv) in &v.terms {
                    let vals = (0..d)
                        .map(|c| multilinear(&self.section, &self.total, &[vu, vv, &self.total.unit(c)], &k))
                        .collect::<Result<Vec<_>>>()?;
                    let shift = &(&(offset - &k) + eu) + ev;
                    out.add_term(shift, &self.total.solve_left(&vals));
                }
            }
        }
        Ok(out.truncate(cutoff))
    }

    /// Classes of `P` printed with exponents in fiber generators.
    pub fn format_total(&self, x: &QHClass) -> String {
        x.format_with(&self.total, &self.fiber.h2)
    }

    /// The fiber-indexed two-point section table `n(a,b;K) = n_P(ι(a), ι(b); σ_ref + K)`.
    pub fn section_data(&self) -> Result<SectionData> {
        let mut table = GWTable::new(
            self.section.kind.clone(),
            crate::gw::Completeness { three: None, two: self.section.complete.two.clone(), four: None },
        );
        let m = self.fiber.dim();
        for k in self.section.classes(2) {
            for a in 0..m {
                for b in 0..m {
                    match multilinear(&self.section, &self.total, &[&self.iota[a], &self.iota[b]], &k) {
                        Ok(v) => table.insert(&self.fiber, &[a, b], k.clone(), v)?,
                        Err(e) if e.is_incomplete() => {}
                        Err(e) => return Err(e),
                    }
                }
            }
        }
        Ok(SectionData {
            label: self.sigma_ref_label(),
            fiber: self.fiber.clone(),
            fiber_gw: self.fiber_gw.clone(),
            table,
        })
    }

    /// `Ī_c = c_φ(σ) mod N`.
    pub fn ic(&self) -> Result<ChernResidue> {
        chern_residue(&self.c_ref(), self.fiber.min_chern)
    }

    /// Poincaré dual in `P` of a class in `H²(P)` given by its values on the lattice generators.
    fn pd_of_generator_values(&self, values: &[Q]) -> Result<Vec<Q>> {
        let r = self.realization()?;
        let mut alpha = linalg::zero_vec(self.total.dim());
        for (g, &i) in r.iter().enumerate() {
            alpha[i] = values[g].clone();
        }
        Ok(self.total.pd(&alpha))
    }

    fn realization(&self) -> Result<&Vec<usize>> {
        let r = self
            .total
            .realized_by
            .as_ref()
            .ok_or_else(|| QhError::Malformed("total lattice generators are not realized by basis classes".into()))?;
        let deg2: Vec<usize> = (0..self.total.dim()).filter(|&i| self.total.degree(i) == 2).collect();
        let mut hit = r.clone();
        hit.sort_unstable();
        if hit != deg2 {
            return Err(QhError::Malformed("total lattice generators must be exactly the degree-2 basis classes".into()));
        }
        Ok(r)
    }

    /// `I_k = ∫_P c_φ^k u_φ^{n+1−k}`.
    pub fn ik(&self, k: u32) -> Result<Q> {
        let n = self.fiber.n;
        if k > n + 1 {
            return Err(QhError::Malformed(format!("I_k needs 0 ≤ k ≤ {}", n + 1)));
        }
        let u = self.pd_of_generator_values(&self.total.h2.omega)?;
        let c = self.pd_of_generator_values(&self.total.h2.c1)?;
        let mut x = self.total.fundamental();
        for _ in 0..k {
            x = self.total.cap(&x, &c)?;
        }
        for _ in 0..(n + 1 - k) {
            x = self.total.cap(&x, &u)?;
        }
        Ok(self.total.intersect(&x, &self.total.fundamental()))
    }

    /// `PD(u_φ^n)` in lattice coordinates, with the spherical coordinates dropped.
    pub fn iu(&self) -> Result<Vec<Q>> {
        let u = self.pd_of_generator_values(&self.total.h2.omega)?;
        let mut x = self.total.fundamental();
        for _ in 0..self.fiber.n {
            x = self.total.cap(&x, &u)?;
        }
        let r = self.realization()?;
        Ok(r
            .iter()
            .enumerate()
            .map(|(g, &i)| if self.total.h2.spherical[g] { Q::zero() } else { x[i].clone() })
            .collect())
    }

    pub fn format_iu(&self, coords: &[Q]) -> String {
        self.total.h2.format_coords(coords)
    }

    /// Splitting with `e_i · s(f_j) = δ_ij` and `s(e_i) · s(f_j) = 0`.
    pub fn correct_splitting(&self) -> Result<Mat> {
        correct_splitting(&self.fiber, &self.total, &self.iota, &self.splitting)
    }

    /// Capacity bound from `n_P([M],[M],[pt]; σ_φ)`, for `[Ω] = u_φ + κ·(base area class)`.
    pub fn nonsqueezing_bound(&self, kappa: &Q) -> Result<Nonsqueeze> {
        let data = self.section_data()?;
        let offset = data.sigma_phi()?;
        let m = self.m_class();
        let pt = self.iota[self.fiber.point].clone();
        let v = multilinear(&self.section, &self.total, &[&m, &m, &pt], &offset)?;
        if v.is_zero() {
            Ok(Nonsqueeze::None("invariant vanishes".into()))
        } else {
            Ok(Nonsqueeze::Bound(kappa.clone()))
        }
    }
}

/// Corrects a splitting `s′` with `s′(e_i) · ι(f_j) = δ_ij` so that the
/// images of the basis and of its dual are orthogonal.
pub fn correct_splitting(fiber: &ManifoldModel, total: &ManifoldModel, iota: &Mat, s_prime: &Mat) -> Result<Mat> {
    let m = fiber.dim();
    let f = fiber.dual_basis();
    let iota_f: Vec<Vec<Q>> = f.iter().map(|fj| linalg::vec_mat(fj, iota)).collect();
    for i in 0..m {
        for j in 0..m {
            let v = total.intersect(&s_prime[i], &iota_f[j]);
            let want = if i == j { Q::one() } else { Q::zero() };
            if v != want {
                return Err(QhError::PrimingInvalid(format!(
                    "s'({}) · ι(f_{}) = {v}, expected {want}",
                    fiber.label(i),
                    fiber.label(j)
                )));
            }
        }
    }
    let n = fiber.n;
    let half = Q::new(1.into(), 2.into());
    let mut out = s_prime.clone();
    for i in 0..m {
        let di = fiber.degree(i);
        if di + 1 < n {
            continue;
        }
        for j in 0..m {
            if fiber.degree(j) + di + 2 != 2 * n {
                continue;
            }
            let qij = total.intersect(&s_prime[i], &s_prime[j]);
            if qij.is_zero() {
                continue;
            }
            let coef = if di + 1 == n {
                &half * sign(n - 1) * &qij
            } else {
                sign(fiber.degree(j)) * &qij
            };
            linalg::add_scaled(&mut out[i], &-coef, &iota_f[j]);
        }
    }
    Ok(out)
}

fn sign(k: u32) -> Q {
    if k % 2 == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}
