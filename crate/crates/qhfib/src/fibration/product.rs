//! The trivial fibration `M × S² → S²` and the comparison of its quantum
//! homology with `QH(M) ⊗ QH(S²)`.

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{QhError, Result};
use crate::gw::{Bound, Completeness, GWTable, TableKind};
use crate::linalg;
use crate::manifold::{BasisElement, ManifoldModel, QHClass};
use crate::novikov::{Exp, H2Lattice};
use crate::quantum::QuantumRing;
use crate::rational::Q;
use crate::report::Check;

use super::FibrationModel;

fn i_label(m: &ManifoldModel, a: usize) -> String {
    format!("i({})", m.label(a))
}

fn s_label(m: &ManifoldModel, a: usize) -> String {
    format!("s({})", m.label(a))
}

/// `H_*(M × S²)` on the basis `i(e) = e × pt`, then `s(e) = e × [S²]`.
fn product_space(m: &ManifoldModel, h2: H2Lattice, min_chern: u64) -> Result<ManifoldModel> {
    let d = m.dim();
    let triple = m.triple.as_ref().ok_or(QhError::MissingTripleData)?;
    let mut basis = Vec::with_capacity(2 * d);
    for a in 0..d {
        basis.push(BasisElement { label: i_label(m, a), degree: m.degree(a) });
    }
    for a in 0..d {
        basis.push(BasisElement { label: s_label(m, a), degree: m.degree(a) + 2 });
    }
    let mut g = linalg::zeros(2 * d, 2 * d);
    let mut t = vec![vec![linalg::zero_vec(2 * d); 2 * d]; 2 * d];
    for a in 0..d {
        for b in 0..d {
            g[a][d + b] = m.pairing[a][b].clone();
            g[d + a][b] = m.pairing[a][b].clone();
            for (c, x) in triple[a][b].iter().enumerate() {
                t[a][d + b][c] = x.clone();
                t[d + a][b][c] = x.clone();
                t[d + a][d + b][d + c] = x.clone();
            }
        }
    }
    let p = ManifoldModel::new(format!("{} x S2", m.name), m.n + 1, basis, g, Some(t), h2, min_chern)?;
    let realizers = m.realized_by.as_ref().ok_or_else(|| QhError::Malformed(format!("{} has no realizing classes", m.name)))?;
    let mut labels: Vec<String> = realizers.iter().map(|&r| i_label(m, r)).collect();
    labels.push(s_label(m, m.point));
    p.with_realization(&labels)
}

/// The product fibration `M × S²` with `σ_ref = {x} × S²`, built from the
/// fiber table by the product formula.
pub fn product_fixture(m: &ManifoldModel, gw: &GWTable) -> Result<FibrationModel> {
    let lat = &m.h2;
    let mut gens: Vec<String> = (0..lat.rank()).map(|i| lat.generators[i].clone()).collect();
    gens.push("S2".into());
    let mut omega = lat.omega.clone();
    omega.push(Q::zero());
    let mut c1 = lat.c1.clone();
    c1.push(Q::zero());
    let mut spherical = lat.spherical.clone();
    spherical.push(true);
    let h2 = H2Lattice::new(gens, omega, c1, spherical)?;
    let min_chern = m.min_chern.gcd(&2);
    let p = product_space(m, h2, min_chern)?;
    let d = m.dim();
    let iota: Vec<Vec<Q>> = (0..d).map(|a| p.unit(a)).collect();
    let splitting: Vec<Vec<Q>> = (0..d).map(|a| p.unit(d + a)).collect();

    let mut vertical = GWTable::curve(Completeness { three: gw.complete.three.clone(), two: gw.complete.two.clone(), four: None });
    for ((idx, b), v) in &gw.three_point {
        for slot in 0..3 {
            let lifted: Vec<usize> = (0..3).map(|k| if k == slot { idx[k] } else { d + idx[k] }).collect();
            vertical.insert(&p, &lifted, b.clone(), v.clone())?;
        }
    }
    for ((idx, b), v) in &gw.two_point {
        vertical.insert(&p, &[idx[0], d + idx[1]], b.clone(), v.clone())?;
        vertical.insert(&p, &[d + idx[0], idx[1]], b.clone(), v.clone())?;
    }

    let section_complete = Completeness { three: gw.complete.three.clone(), two: Some(Bound::Infinite), four: None };
    let mut section = GWTable::new(TableKind::Section { u_ref: Q::zero(), c_ref: Q::zero() }, section_complete);
    for ((idx, b), v) in &gw.three_point {
        section.insert(&p, idx, b.clone(), v.clone())?;
    }
    for a in 0..d {
        for c in a..d {
            for e in c..d {
                let v = m.classical3(a, c, e)?;
                if !v.is_zero() {
                    section.insert(&p, &[a, c, e], Exp::zero(), v)?;
                }
            }
            let v = m.pairing[a][c].clone();
            if !v.is_zero() {
                section.insert(&p, &[a, c], Exp::zero(), v)?;
            }
        }
    }
    let mut sigma_ref = linalg::zero_vec(lat.rank() + 1);
    sigma_ref[lat.rank()] = Q::one();
    FibrationModel::new(format!("{} x S2", m.name), m.clone(), gw.clone(), p, iota, splitting, sigma_ref, vertical, section)
}

/// `P` as a closed manifold, with the base of area `kappa`: fiber classes and
/// section classes `σ_ref + B` (energy `ω(B) + κ`, Chern number `c(B) + 2`)
/// in one curve table.
fn closed_total(f: &FibrationModel, kappa: &Q) -> Result<(ManifoldModel, GWTable)> {
    let lat = &f.total.h2;
    let r = lat.rank();
    let mut omega = lat.omega.clone();
    omega[r - 1] = kappa.clone();
    let mut c1 = lat.c1.clone();
    c1[r - 1] = Q::from_integer(2.into());
    let h2 = H2Lattice::new(lat.generators.clone(), omega, c1, lat.spherical.clone())?;
    let mut p = f.total.clone();
    p.h2 = h2;
    let base = Exp::new(kappa.clone(), Q::from_integer(2.into()));
    let shift = |b: &Q| -> Option<Bound> { Some(Bound::Finite(b.clone())) };
    let three = match (&f.vertical.complete.three, &f.section.complete.three) {
        (Some(Bound::Infinite), Some(Bound::Infinite)) => Some(Bound::Infinite),
        (Some(Bound::Finite(v)), Some(Bound::Infinite)) => shift(v),
        (Some(Bound::Infinite), Some(Bound::Finite(s))) => shift(&(s + kappa)),
        (Some(Bound::Finite(v)), Some(Bound::Finite(s))) => shift(&v.clone().min(s + kappa)),
        _ => None,
    };
    let mut t = GWTable::curve(Completeness { three, two: None, four: None });
    for ((idx, b), v) in &f.vertical.three_point {
        t.set_raw(3, (idx.clone(), b.clone()), v.clone());
    }
    for ((idx, b), v) in &f.section.three_point {
        t.set_raw(3, (idx.clone(), b + &base), v.clone());
    }
    Ok((p, t))
}

/// The product structure of `QH(M × S²)` against `QH(M) ⊗ QH(S²)` on basis
/// pairs, with `(a, 1) ↔ s(a)` and `(a, pt) ↔ i(a)`.
pub fn tensor_checks(f: &FibrationModel, kappa: &Q, cutoff: &Q) -> Vec<Check> {
    let mut out = Vec::new();
    let (p, table) = match closed_total(f, kappa) {
        Ok(x) => x,
        Err(e) => {
            out.push(Check::skipped("QH(M x S2) = QH(M) (x) QH(S2)", "all", e.to_string()));
            return out;
        }
    };
    let ring = QuantumRing::new(&p, &table);
    let fiber = f.fiber_ring();
    let m = &f.fiber;
    let d = m.dim();
    let line = Exp::new(kappa.clone(), Q::from_integer(2.into()));
    let as_i = |x: &QHClass| x.map_linear(|v| f.iota_of(v));
    let as_s = |x: &QHClass| x.map_linear(|v| f.s_of(v));
    for a in 0..d {
        for b in 0..d {
            let (ea, eb) = (QHClass::basis(d, a), QHClass::basis(d, b));
            for (la, xa, pa) in [("pt", true, as_i(&ea)), ("1", false, as_s(&ea))] {
                for (lb, xb, pb) in [("pt", true, as_i(&eb)), ("1", false, as_s(&eb))] {
                    let inst = format!("({}, {}) * ({}, {})", m.label(a), la, m.label(b), lb);
                    let r = (|| -> Result<(String, String)> {
                        let lhs = ring.product(&pa, &pb, cutoff)?;
                        let ab = fiber.product(&ea, &eb, cutoff)?;
                        let rhs = match (xa, xb) {
                            (true, true) => as_s(&ab).shift(&-&line),
                            (false, false) => as_s(&ab),
                            _ => as_i(&ab),
                        }
                        .truncate(cutoff);
                        Ok((lhs.format(&p), rhs.format(&p)))
                    })();
                    out.push(match r {
                        Ok((l, r)) => Check::compare("QH(M x S2) = QH(M) (x) QH(S2)", inst, l, r),
                        Err(e) => Check::skipped("QH(M x S2) = QH(M) (x) QH(S2)", inst, e.to_string()),
                    });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rational::qi;

    #[test]
    fn product_pairing_and_realization() {
        let m = catalog::sphere(&qi(2));
        let f = product_fixture(&m, &catalog::sphere_gw(&m)).unwrap();
        let p = &f.total;
        assert_eq!(p.dim(), 4);
        assert_eq!(p.label(p.top), "s(1)");
        assert_eq!(p.label(p.point), "i(pt)");
        assert_eq!(p.min_chern, 2);
        let r: Vec<&str> = p.realized_by.as_ref().unwrap().iter().map(|&i| p.label(i)).collect();
        assert_eq!(r, ["i(1)", "s(pt)"]);
    }

    #[test]
    fn product_matches_tensor_product() {
        let m = catalog::sphere(&qi(2));
        let f = product_fixture(&m, &catalog::sphere_gw(&m)).unwrap();
        let checks = tensor_checks(&f, &qi(3), &qi(10));
        assert_eq!(checks.len(), 16);
        for c in &checks {
            assert_eq!(c.status, crate::report::Status::Pass, "{c:?}");
        }
        let t = catalog::torus();
        let f = product_fixture(&t, &catalog::torus_gw()).unwrap();
        assert!(tensor_checks(&f, &qi(1), &qi(5)).iter().all(|c| c.status == crate::report::Status::Pass));
    }
}
