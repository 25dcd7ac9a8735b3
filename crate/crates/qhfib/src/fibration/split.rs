//! Ring splittings `s_A : QH(M) → QH(P)` built from `ρ(φ) = μ[M] ⊗ e^{−A} + …`.

use std::fmt;

use num_traits::Zero;

use crate::error::{QhError, Result};
use crate::gw::Bound;
use crate::linalg::Mat;
use crate::manifold::QHClass;
use crate::novikov::Exp;
use crate::rational::Q;
use crate::report::Check;

use super::{chi_total, multilinear, ChernResidue, FibrationModel, RhoShape};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitHypothesis {
    /// Every fiber-class invariant of `P` with `B ≠ 0` vanishes.
    VerticalVanishing,
    /// `[M] *_{H,σ_A} [M] = μ[P]`.
    SelfIntersection,
    /// Every fiber three-point invariant with `B ≠ 0` vanishes and `ρ` is a monomial.
    FiberRigid,
}

impl fmt::Display for SplitHypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SplitHypothesis::VerticalVanishing => "vertical-vanishing",
            SplitHypothesis::SelfIntersection => "self-intersection",
            SplitHypothesis::FiberRigid => "fiber-rigid",
        })
    }
}

#[derive(Debug, Clone)]
pub struct SplitReport {
    pub hypothesis: SplitHypothesis,
    pub mu: Q,
    pub a: Exp,
    /// Offset of `σ_A = σ_φ + A`.
    pub sigma_a: Exp,
    /// Row `a` holds `s_A(e_a)`.
    pub s_a: Mat,
    pub shape: RhoShape,
    pub ic: ChernResidue,
    pub iu: Vec<Q>,
    pub checks: Vec<Check>,
}

impl SplitReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status == crate::report::Status::Pass)
    }
}

/// Tries the hypotheses in order and uses the first that holds.
pub fn ring_split_check(f: &FibrationModel, cutoff: &Q) -> Result<SplitReport> {
    let mut why = Vec::new();
    for h in [SplitHypothesis::VerticalVanishing, SplitHypothesis::FiberRigid, SplitHypothesis::SelfIntersection] {
        match ring_split_check_with(f, h, cutoff) {
            Ok(r) => return Ok(r),
            Err(QhError::HypothesisFailed(w)) => why.extend(w.into_iter().map(|x| format!("{h}: {x}"))),
            Err(e) => return Err(e),
        }
    }
    Err(QhError::HypothesisFailed(why))
}

fn nonzero_entries(t: &crate::gw::GWTable, lat: &crate::novikov::H2Lattice) -> Vec<String> {
    t.entries()
        .into_iter()
        .filter(|(_, (_, b), v)| !b.is_zero() && !v.is_zero())
        .map(|(arity, (_, b), _)| format!("nonzero {arity}-point entry in class {}", lat.format_exp(&b)))
        .collect()
}

fn infinite(t: &crate::gw::GWTable, arities: &[usize]) -> Vec<String> {
    arities
        .iter()
        .filter(|&&a| t.bound(a) != &Some(Bound::Infinite))
        .map(|a| format!("{a}-point table is not complete at every energy"))
        .collect()
}

pub fn ring_split_check_with(f: &FibrationModel, hyp: SplitHypothesis, cutoff: &Q) -> Result<SplitReport> {
    let m = &f.fiber;
    let data = f.section_data()?;
    let sigma_phi = data.sigma_phi()?;
    let rho = data.rho(cutoff)?;
    let shape = RhoShape::of(m, &rho);
    let mut failed = Vec::new();
    match hyp {
        SplitHypothesis::VerticalVanishing => {
            failed.extend(nonzero_entries(&f.vertical, &m.h2));
            failed.extend(infinite(&f.vertical, &[2, 3]));
        }
        SplitHypothesis::FiberRigid => {
            failed.extend(nonzero_entries(&f.fiber_gw, &m.h2).into_iter().filter(|s| s.starts_with("nonzero 3")));
            failed.extend(infinite(&f.fiber_gw, &[3]));
            if !matches!(shape, RhoShape::MonomialScalar { .. }) {
                failed.push(format!("rho is {}", shape.describe(m)));
            }
        }
        SplitHypothesis::SelfIntersection => {}
    }
    failed.dedup();
    if !failed.is_empty() {
        return Err(QhError::HypothesisFailed(failed));
    }
    let top = rho.component(m.top);
    let (e, mu) = match top.terms.iter().next() {
        Some((e, mu)) if top.terms.len() == 1 => (e.clone(), mu.clone()),
        _ => {
            return Err(QhError::HypothesisFailed(vec![format!(
                "[M] component of rho = {} is not a monomial",
                rho.format(m)
            )]))
        }
    };
    let a = -&e;
    let sigma_a = &sigma_phi + &a;

    if hyp == SplitHypothesis::SelfIntersection {
        let mc = QHClass::classical(f.m_class());
        let x = f.horizontal_product(&mc, &mc, &sigma_a, cutoff).map_err(|e| QhError::HypothesisFailed(vec![e.to_string()]))?;
        let want = QHClass::classical(f.total.fundamental()).scale(&mu);
        if x != want.truncate(cutoff) {
            return Err(QhError::HypothesisFailed(vec![format!("[M] *H [M] = {}", f.format_total(&x))]));
        }
    }

    let (p, md, pd) = (&f.total, m.dim(), f.total.dim());
    let mc = f.m_class();
    let mut s_a = Vec::with_capacity(md);
    for i in 0..md {
        let vals = (0..pd)
            .map(|v| {
                let ev = p.unit(v);
                match multilinear(&f.section, p, &[&f.iota[i], &mc, &ev], &sigma_a) {
                    // [M] · σ = 1 for every section class
                    Err(e) if e.is_incomplete() => multilinear(&f.section, p, &[&f.iota[i], &ev], &sigma_a),
                    r => r,
                }
            })
            .collect::<Result<Vec<_>>>()?;
        s_a.push(p.solve_left(&vals).into_iter().map(|x| x / &mu).collect::<Vec<_>>());
    }

    let mut checks = Vec::new();
    let lab = |i: usize| m.label(i).to_string();
    for i in 0..md {
        checks.push(Check::compare(
            "s_A(a) cap [M] = a",
            lab(i),
            QHClass::classical(f.cap_fiber(&s_a[i])).format(m),
            lab(i),
        ));
        for j in 0..md {
            let inst = format!("({},{})", lab(i), lab(j));
            checks.push(Check::compare("s_A(a).s_A(b) = 0", inst.clone(), p.intersect(&s_a[i], &s_a[j]), 0));
            match p.cap(&s_a[i], &s_a[j]) {
                Ok(c) => {
                    for k in 0..md {
                        let inst = format!("({},{},{})", lab(i), lab(j), lab(k));
                        checks.push(Check::compare("(s_A(a) cap s_A(b)).s_A(c) = 0", inst, p.intersect(&c, &s_a[k]), 0));
                    }
                }
                Err(e) => checks.push(Check::skipped("(s_A(a) cap s_A(b)).s_A(c) = 0", inst.clone(), e.to_string())),
            }
            let r = chi_total(f, [&s_a[i], &s_a[j], &mc, &mc], &sigma_a).map(|chi| (&mu * p.intersect(&s_a[i], &s_a[j]), chi));
            checks.push(match r {
                Ok((l, r)) => Check::compare("mu s_A(a).s_A(b) = chi(s_A a, s_A b, M, M)", inst, l, r),
                Err(e) => Check::skipped("mu s_A(a).s_A(b) = chi(s_A a, s_A b, M, M)", inst, e.to_string()),
            });
        }
    }
    Ok(SplitReport { hypothesis: hyp, mu, a, sigma_a, s_a, shape, ic: f.ic()?, iu: f.iu()?, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::fibration::product_fixture;
    use crate::rational::qi;

    #[test]
    fn torus_product_splits_with_trivial_rho() {
        let t = catalog::torus();
        let f = product_fixture(&t, &catalog::torus_gw()).unwrap();
        let r = ring_split_check(&f, &qi(5)).unwrap();
        assert_eq!(r.hypothesis, SplitHypothesis::VerticalVanishing);
        assert_eq!(r.mu, qi(1));
        assert!(r.a.is_zero());
        assert_eq!(r.s_a, f.splitting);
        assert!(r.all_pass(), "{:?}", r.checks);
    }

    #[test]
    fn ruled_total_space_fails_vertical_vanishing() {
        let f = catalog::ruled_total(&qi(1));
        match ring_split_check_with(&f, SplitHypothesis::VerticalVanishing, &qi(10)) {
            Err(QhError::HypothesisFailed(w)) => assert!(!w.is_empty()),
            other => panic!("{other:?}"),
        }
    }
}
