//! Named verification suites over a manifold with its invariants, or over a fibration.

use num_traits::{One, Zero};

use crate::error::{QhError, Result};
use crate::fibration::{self, chi_total, FibrationModel, SectionData};
use crate::gw::{GWTable, TableKind};
use crate::linalg;
use crate::manifold::{ManifoldModel, QHClass};
use crate::novikov::{Exp, H2Lattice};
use crate::quantum::{labels, QuantumRing};
use crate::rational::Q;
use crate::report::{Check, Report};

#[derive(Debug, Clone, Copy)]
pub enum Target<'a> {
    Manifold(&'a ManifoldModel, &'a GWTable),
    Fibration(&'a FibrationModel),
}

pub const MANIFOLD_SUITES: &[&str] = &["manifold", "axioms", "assoc"];
pub const FIBRATION_SUITES: &[&str] = &["manifold", "axioms", "assoc", "prop-gw", "wang", "module", "fibration", "composition"];

/// Runs one suite, or every suite for `"all"`.
pub fn run_suite(target: Target, suite: &str, cutoff: &Q) -> Result<Report> {
    let (names, completeness) = match target {
        Target::Manifold(_, gw) => (MANIFOLD_SUITES, gw.complete.summary()),
        Target::Fibration(f) => (
            FIBRATION_SUITES,
            format!(
                "fiber {}; vertical {}; section {}",
                f.fiber_gw.complete.summary(),
                f.vertical.complete.summary(),
                f.section.complete.summary()
            ),
        ),
    };
    let chosen: Vec<&str> = if suite == "all" {
        names.to_vec()
    } else if names.contains(&suite) {
        vec![suite]
    } else {
        return Err(QhError::UnknownSuite(suite.into()));
    };
    let mut report = Report::new(suite, cutoff, completeness);
    for s in chosen {
        let checks = match target {
            Target::Manifold(m, gw) => manifold_suite(m, gw, s, cutoff),
            Target::Fibration(f) => fibration_suite(f, s, cutoff),
        };
        report.extend(checks);
    }
    Ok(report)
}

fn manifold_suite(m: &ManifoldModel, gw: &GWTable, suite: &str, cutoff: &Q) -> Vec<Check> {
    match suite {
        "manifold" => structure_checks(m),
        "axioms" => validate_gw_axioms(gw, m),
        _ => ring_checks(&QuantumRing::new(m, gw), cutoff),
    }
}

fn fibration_suite(f: &FibrationModel, suite: &str, cutoff: &Q) -> Vec<Check> {
    match suite {
        "manifold" => {
            let mut out = structure_checks(&f.fiber);
            out.extend(structure_checks(&f.total));
            out
        }
        "axioms" => fibration_axioms(f),
        "assoc" => {
            let mut out = ring_checks(&f.fiber_ring(), cutoff);
            out.extend(section_chi_checks(f));
            out
        }
        "prop-gw" => verify_prop_gw(f),
        "wang" => quantum_wang_check(f, cutoff),
        "module" => module_suite(f, cutoff),
        "fibration" => fibration_structure(f),
        _ => composition_suite(f, cutoff),
    }
}

fn ring_checks(r: &QuantumRing, cutoff: &Q) -> Vec<Check> {
    let mut out = r.associativity_checks(cutoff);
    out.extend(r.chi_decomposition_checks());
    out.extend(r.commutativity_checks(cutoff));
    out.extend(r.unit_checks(cutoff));
    out
}

/// Graded symmetry of the pairing and of `∩`, the unit `[M]`, associativity of
/// `∩` and `(a ∩ b) · c = a · (b ∩ c)` on the basis.
pub fn structure_checks(m: &ManifoldModel) -> Vec<Check> {
    let d = m.dim();
    let name = &m.name;
    let mut out = Vec::new();
    let sign = |i: usize, j: usize| crate::manifold::koszul(m.degree(i), m.degree(j));
    for i in 0..d {
        for j in 0..d {
            let inst = format!("{name}: ({},{})", m.label(i), m.label(j));
            out.push(Check::compare("pairing graded symmetric", inst, &m.pairing[i][j], &m.pairing[j][i] * sign(i, j)));
        }
    }
    if m.triple.is_none() {
        out.push(Check::skipped("intersection product", name.as_str(), QhError::MissingTripleData.to_string()));
        return out;
    }
    let fmt = |v: &[Q]| QHClass::classical(v.to_vec()).format(m);
    for i in 0..d {
        let ei = m.unit(i);
        let r = m.cap(&m.fundamental(), &ei).map(|x| fmt(&x));
        match r {
            Ok(x) => out.push(Check::compare("[M] cap a = a", format!("{name}: {}", m.label(i)), x, m.label(i))),
            Err(e) => out.push(Check::skipped("[M] cap a = a", m.label(i), e.to_string())),
        }
        for j in 0..d {
            let ej = m.unit(j);
            let (ij, ji) = (m.cap(&ei, &ej).unwrap_or_default(), m.cap(&ej, &ei).unwrap_or_default());
            let inst = format!("{name}: ({},{})", m.label(i), m.label(j));
            let s = sign(i, j);
            let sji: Vec<Q> = ji.iter().map(|x| x * &s).collect();
            out.push(Check::compare("cap graded commutative", inst, fmt(&ij), fmt(&sji)));
            for k in 0..d {
                let ek = m.unit(k);
                let inst = format!("{name}: ({},{},{})", m.label(i), m.label(j), m.label(k));
                let l = m.cap(&ij, &ek).unwrap_or_default();
                let r = m.cap(&ei, &m.cap(&ej, &ek).unwrap_or_default()).unwrap_or_default();
                out.push(Check::compare("cap associative", inst.clone(), fmt(&l), fmt(&r)));
                let jk = m.cap(&ej, &ek).unwrap_or_default();
                out.push(Check::compare("(a cap b).c = a.(b cap c)", inst, m.intersect(&ij, &ek), m.intersect(&ei, &jk)));
            }
        }
    }
    out
}

fn faithful(lat: &H2Lattice) -> bool {
    linalg::rank(&vec![lat.omega.clone(), lat.c1.clone()]) == lat.rank()
}

/// Curve class of `P` carrying the key `b` of a fiber lattice, through `ι`.
fn fiber_curve(f: &FibrationModel, b: &Exp) -> Option<Vec<Q>> {
    if !faithful(&f.fiber.h2) {
        return None;
    }
    let c = f.fiber.curve_class(&f.fiber.h2.rep(b)?)?;
    Some(f.iota_of(&c))
}

/// Axiom checks on every stored entry of a table of invariants of `m`:
/// dimension rule, fundamental class, divisor rule and the four-point reduction.
pub fn validate_gw_axioms(table: &GWTable, m: &ManifoldModel) -> Vec<Check> {
    let degree = |d: usize, b: &Exp| -> Option<Q> {
        if faithful(&m.h2) {
            m.divisor_degree(d, b)
        } else {
            None
        }
    };
    axioms_with(table, m, &m.name, &degree)
}

fn axioms_with(table: &GWTable, m: &ManifoldModel, name: &str, divisor: &dyn Fn(usize, &Exp) -> Option<Q>) -> Vec<Check> {
    let mut out = Vec::new();
    let lat = &m.h2;
    let n = Q::from_integer(m.n.into());
    let two = Q::from_integer(2.into());
    let section = table.is_section();
    let inst = |idx: &[usize], b: &Exp| format!("{name}: ({};{})", labels(m, idx), lat.format_exp(b));
    for (arity, (idx, b), v) in table.entries() {
        if v.is_zero() || (!section && b.is_zero()) {
            continue;
        }
        let codim: Q = idx.iter().map(|&i| &two * &n - Q::from_integer(m.degree(i).into())).sum();
        let k = Q::from_integer((arity as i64).into());
        let mut want = &two * &n + &two * table.chern_total(&b) + &two * &k - Q::from_integer(6.into());
        if arity == 4 {
            want -= &two;
        }
        out.push(Check::compare("dimension rule", inst(&idx, &b), codim, want));
        let with_top = idx.contains(&m.top);
        out.push(Check::truth(
            "fundamental class kills nonconstant invariants",
            inst(&idx, &b),
            !with_top,
            if with_top { format!("value {v}") } else { String::new() },
        ));
    }
    let divisors = m.divisor_indices();
    for ((idx, b), v) in &table.three_point {
        if !section && b.is_zero() {
            continue;
        }
        for p in 0..3 {
            if !divisors.contains(&idx[p]) {
                continue;
            }
            let rest: Vec<usize> = (0..3).filter(|&q| q != p).map(|q| idx[q]).collect();
            let i = format!("{} with divisor {}", inst(idx, b), m.label(idx[p]));
            let Some(db) = divisor(idx[p], b) else {
                out.push(Check::skipped("divisor rule", i, "divisor pairing not determined by the lattice"));
                continue;
            };
            // the divisor has even degree, so moving it last costs no sign
            match table.lookup(m, &rest, b) {
                Ok(two_pt) => out.push(Check::compare("divisor rule", i, v, db * two_pt)),
                Err(e) => out.push(Check::skipped("divisor rule", i, e.to_string())),
            }
        }
    }
    for ((idx, b), v) in &table.two_point {
        for &d in &divisors {
            let Some(db) = divisor(d, b) else { continue };
            if db.is_zero() {
                continue;
            }
            if let Ok(three) = table.lookup(m, &[idx[0], idx[1], d], b) {
                let i = format!("{} with divisor {}", inst(idx, b), m.label(d));
                out.push(Check::compare("divisor rule", i, three, db * v));
            }
        }
    }
    for ((idx, b), v) in &table.four_point_chi {
        if let Some(p) = idx.iter().position(|&i| i == m.top) {
            let rest: Vec<usize> = (0..4).filter(|&q| q != p).map(|q| idx[q]).collect();
            match table.lookup(m, &rest, b) {
                Ok(x) => out.push(Check::compare("four-point reduction", inst(idx, b), v, x)),
                Err(e) => out.push(Check::skipped("four-point reduction", inst(idx, b), e.to_string())),
            }
        }
    }
    out
}

/// Axioms for the fiber table, both tables of `P`, and the vanishing of
/// fiber-class invariants through `[M]`.
pub fn fibration_axioms(f: &FibrationModel) -> Vec<Check> {
    let mut out = validate_gw_axioms(&f.fiber_gw, &f.fiber);
    let p = &f.total;
    let vertical_deg = |d: usize, b: &Exp| -> Option<Q> { Some(p.intersect(&p.unit(d), &fiber_curve(f, b)?)) };
    let mut vertical = f.vertical.clone();
    vertical.kind = TableKind::Curve;
    // fiber classes are printed against the fiber lattice
    let mut p_fiber = p.clone();
    p_fiber.h2 = f.fiber.h2.clone();
    out.extend(axioms_with(&vertical, &p_fiber, &format!("{} fiber classes", f.name), &vertical_deg));
    let sigma = p.curve_class(&f.sigma_ref);
    let section_deg = |d: usize, b: &Exp| -> Option<Q> {
        let s = sigma.as_ref()?;
        let c = fiber_curve(f, b)?;
        let total: Vec<Q> = s.iter().zip(&c).map(|(x, y)| x + y).collect();
        Some(p.intersect(&p.unit(d), &total))
    };
    out.extend(axioms_with(&f.section, &p_fiber, &format!("{} section classes", f.name), &section_deg));
    let mc = f.m_class();
    for (arity, (idx, b), v) in f.vertical.entries() {
        if b.is_zero() || v.is_zero() {
            continue;
        }
        if idx.iter().any(|&i| p.unit(i) == mc) {
            out.push(Check::truth(
                "fiber-class invariants through [M] vanish",
                format!("{arity}-point ({};{})", labels(p, &idx), f.fiber.h2.format_exp(&b)),
                false,
                format!("value {v}"),
            ));
        }
    }
    out
}

/// Stored section four-point entries against their splitting into three-point invariants.
fn section_chi_checks(f: &FibrationModel) -> Vec<Check> {
    let p = &f.total;
    f.section
        .four_point_chi
        .iter()
        .map(|((idx, k), v)| {
            let inst = format!("({};{})", labels(p, idx), f.fiber.h2.format_exp(k));
            let us: Vec<Vec<Q>> = idx.iter().map(|&i| p.unit(i)).collect();
            match chi_total(f, [&us[0], &us[1], &us[2], &us[3]], k) {
                Ok(r) => Check::compare("section chi splitting", inst, v, r),
                Err(e) => Check::skipped("section chi splitting", inst, e.to_string()),
            }
        })
        .collect()
}

pub fn verify_prop_gw(f: &FibrationModel) -> Vec<Check> {
    fibration::prop_gw_checks(f)
}

pub fn quantum_wang_check(f: &FibrationModel, cutoff: &Q) -> Vec<Check> {
    fibration::wang_checks(f, cutoff)
}

fn module_suite(f: &FibrationModel, cutoff: &Q) -> Vec<Check> {
    let data = match f.section_data() {
        Ok(d) => d,
        Err(e) => return vec![Check::skipped("section data", f.name.as_str(), e.to_string())],
    };
    let mut out = data.module_checks(&Exp::zero(), cutoff);
    if let Ok(s) = data.sigma_phi() {
        if !s.is_zero() {
            out.extend(data.module_checks(&s, cutoff));
        }
    }
    let lat = &f.fiber.h2;
    for g in 0..lat.rank() {
        out.extend(data.shift_checks(&Exp::zero(), &lat.generator(g), cutoff));
    }
    out.extend(data.ic_independence_checks());
    out.push(horizontal_q_check(f, &data, cutoff));
    out
}

/// `([M] *_{H,σ_ref} [M]) ∩ [M] = Q_{σ_ref}`.
fn horizontal_q_check(f: &FibrationModel, data: &SectionData, cutoff: &Q) -> Check {
    let label = "([M] *H [M]) cap [M] = Q";
    let zero = Exp::zero();
    let mc = QHClass::classical(f.m_class());
    let r = (|| -> Result<(String, String)> {
        let h = f.horizontal_product(&mc, &mc, &zero, cutoff)?;
        let l = f.cap_fiber_class(&h);
        let r = data.q_sigma(&zero, cutoff)?;
        Ok((l.format(&f.fiber), r.format(&f.fiber)))
    })();
    match r {
        Ok((l, r)) => Check::compare(label, data.label.as_str(), l, r),
        Err(e) => Check::skipped(label, data.label.as_str(), e.to_string()),
    }
}

/// Coupling and Chern classes restrict to the fiber, `σ_ref · [M] = 1`,
/// `u_φ^{n+1} = 0`, and the corrected splitting is orthogonal.
pub fn fibration_structure(f: &FibrationModel) -> Vec<Check> {
    let (m, p) = (&f.fiber, &f.total);
    let mut out = Vec::new();
    let value_on = |x: &[Q], w: &[Q]| -> Option<Q> {
        let r = p.realized_by.as_ref()?;
        Some(r.iter().enumerate().map(|(g, &i)| &x[i] * &w[g]).sum())
    };
    let pl = &p.h2;
    for g in 0..m.h2.rank() {
        let gen = m.h2.generator(g);
        let inst = m.h2.generators[g].clone();
        match fiber_curve(f, &gen).and_then(|c| Some((value_on(&c, &pl.omega)?, value_on(&c, &pl.c1)?))) {
            Some((w, c)) => {
                out.push(Check::compare("u restricts to omega on the fiber", inst.clone(), w, &gen.omega));
                out.push(Check::compare("c restricts to c1 on the fiber", inst, c, &gen.chern));
            }
            None => out.push(Check::skipped("u restricts to omega on the fiber", inst, "fiber classes not realized in P")),
        }
    }
    match p.curve_class(&f.sigma_ref) {
        Some(s) => out.push(Check::compare("sigma_ref . [M] = 1", f.sigma_ref_label(), p.intersect(&s, &f.m_class()), 1)),
        None => out.push(Check::skipped("sigma_ref . [M] = 1", f.sigma_ref_label(), "no realizing classes")),
    }
    match f.ik(0) {
        Ok(v) => out.push(Check::compare("u^(n+1) = 0", f.name.as_str(), v, 0)),
        Err(e) => out.push(Check::skipped("u^(n+1) = 0", f.name.as_str(), e.to_string())),
    }
    match f.correct_splitting() {
        Ok(s) => {
            let d = m.dim();
            let g = m.dual_basis();
            for i in 0..d {
                for j in 0..d {
                    let inst = format!("({},{})", m.label(i), m.label(j));
                    let sf = f.s_of(&g[j]);
                    let delta = if i == j { Q::one() } else { Q::zero() };
                    out.push(Check::compare("e_i . s(f_j) = delta", inst.clone(), p.intersect(&f.iota[i], &sf), delta));
                    out.push(Check::compare("s(e_i) . s(f_j) = 0", inst, p.intersect(&s[i], &linalg::vec_mat(&g[j], &s)), 0));
                }
            }
        }
        Err(e) => out.push(Check::skipped("corrected splitting", f.name.as_str(), e.to_string())),
    }
    out
}

/// `Ψ` of `φ # φ⁻¹` is the identity, composites compose, `ρ` is multiplicative
/// and `σ_φ` is additive.
fn composition_suite(f: &FibrationModel, cutoff: &Q) -> Vec<Check> {
    let mut out = Vec::new();
    let data = match f.section_data() {
        Ok(d) => d,
        Err(e) => return vec![Check::skipped("section data", f.name.as_str(), e.to_string())],
    };
    let m = &f.fiber;
    let d = m.dim();
    let precision = cutoff + data.psi_margin(&Exp::zero()) + Q::one();
    let pair = data.mirror(&precision).and_then(|inv| {
        let c = data.compose(&inv)?;
        Ok((inv, c))
    });
    match pair {
        Ok((inv, comp)) => {
            out.extend(SectionData::composition_checks(&data, &inv, &comp, cutoff));
            for i in 0..d {
                let ei = QHClass::basis(d, i);
                let inst = m.label(i).to_string();
                match comp.psi(&Exp::zero(), &ei, cutoff) {
                    Ok(x) => out.push(Check::compare("Psi of phi # phi^-1 = id", inst, x.format(m), ei.format(m))),
                    Err(e) => out.push(Check::skipped("Psi of phi # phi^-1 = id", inst, e.to_string())),
                }
            }
        }
        Err(e) => out.push(Check::skipped("Psi of phi # phi^-1 = id", f.name.as_str(), e.to_string())),
    }
    match data.compose(&data) {
        Ok(twice) => {
            out.extend(SectionData::composition_checks(&data, &data, &twice, cutoff));
            out.push(SectionData::sigma_additivity_check(&data, &data, &twice));
            let r = (|| -> Result<(String, String)> {
                let r1 = data.rho(cutoff)?;
                let l = twice.rho(cutoff)?;
                let r = data.fiber_ring().product(&r1, &r1, cutoff)?;
                Ok((l.format(m), r.format(m)))
            })();
            out.push(match r {
                Ok((l, r)) => Check::compare("rho(phi # phi) = rho(phi) * rho(phi)", f.name.as_str(), l, r),
                Err(e) => Check::skipped("rho(phi # phi) = rho(phi) * rho(phi)", f.name.as_str(), e.to_string()),
            });
        }
        Err(e) => out.push(Check::skipped("composite Psi", f.name.as_str(), e.to_string())),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rational::qi;
    use crate::report::Status;

    fn failures(r: &Report) -> Vec<String> {
        r.failures().iter().map(|c| format!("{} {} : {} vs {}", c.label, c.instance, c.lhs, c.rhs)).collect()
    }

    #[test]
    fn sphere_passes_every_suite() {
        let s = catalog::sphere(&qi(1));
        let g = catalog::sphere_gw(&s);
        let r = run_suite(Target::Manifold(&s, &g), "all", &qi(4)).unwrap();
        assert!(r.all_pass(), "{:?}", failures(&r));
        assert!(r.count(Status::Pass) > 0);
    }

    #[test]
    fn tampered_sphere_entry_breaks_divisor_rule() {
        let s = catalog::sphere(&qi(1));
        let mut g = catalog::sphere_gw(&s);
        g.set_raw(3, (vec![s.point; 3], s.h2.generator(0)), qi(2));
        let r = run_suite(Target::Manifold(&s, &g), "axioms", &qi(4)).unwrap();
        assert!(r.failures().iter().any(|c| c.label == "divisor rule"));
    }

    #[test]
    fn dimension_rule_flags_bad_degree() {
        let s = catalog::sphere(&qi(1));
        let mut g = catalog::sphere_gw(&s);
        g.set_raw(3, (vec![s.point, s.point, s.top], s.h2.generator(0)), qi(1));
        let r = run_suite(Target::Manifold(&s, &g), "axioms", &qi(4)).unwrap();
        let labels: Vec<&str> = r.failures().iter().map(|c| c.label.as_str()).collect();
        assert!(labels.contains(&"dimension rule"));
        assert!(labels.contains(&"fundamental class kills nonconstant invariants"));
    }

    #[test]
    fn unknown_suite() {
        let s = catalog::sphere(&qi(1));
        let g = catalog::sphere_gw(&s);
        assert_eq!(run_suite(Target::Manifold(&s, &g), "prop-gw", &qi(1)), Err(QhError::UnknownSuite("prop-gw".into())));
    }

    #[test]
    fn shipped_fibrations_pass_every_suite() {
        let s = catalog::sphere(&qi(2));
        let fibrations = [
            catalog::ruled_total(&qi(1)),
            catalog::sphere_rotation(&qi(2)),
            fibration::product_fixture(&s, &catalog::sphere_gw(&s)).unwrap(),
        ];
        for f in &fibrations {
            let r = run_suite(Target::Fibration(f), "all", &qi(6)).unwrap();
            assert!(r.all_pass(), "{}: {:?}", f.name, failures(&r));
        }
    }
}
