//! One line per acceptance criterion, every comparison at exact rational equality.

mod common;

use std::path::PathBuf;

use num_traits::{One, Zero};
use qhfib::error::QhError;
use qhfib::expr::parse_class;
use qhfib::fibration::{
    correct_splitting, ring_split_check, tensor_checks, product_fixture, FibrationModel, Nonsqueeze,
    SplitHypothesis,
};
use qhfib::fixture::{load_path, Fixture};
use qhfib::gw::{canonical, GWTable};
use qhfib::linalg;
use qhfib::manifold::{ManifoldModel, QHClass};
use qhfib::novikov::Exp;
use qhfib::quantum::QuantumRing;
use qhfib::rational::{q, qi, Q};
use qhfib::report::{Report, Status};
use qhfib::validator::{run_suite, Target, FIBRATION_SUITES, MANIFOLD_SUITES};
use rand::rngs::StdRng;
use rand::SeedableRng;

type Problems = Vec<String>;

fn fixture(stem: &str) -> Fixture {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(format!("{stem}.json"));
    load_path(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

fn fibration(stem: &str) -> FibrationModel {
    fixture(stem).fibration().expect("fibration fixture").clone()
}

const FIBRATIONS: &[&str] =
    &["ruled_rotation_k1", "ruled_rotation_k2", "ruled_rotation_k1_2", "sphere_rotation", "product_sphere", "product_torus"];
const MANIFOLDS: &[&str] = &["sphere", "torus", "ruled_fiber"];

fn expect<T: PartialEq + std::fmt::Debug>(out: &mut Problems, what: &str, got: T, want: T) {
    if got != want {
        out.push(format!("{what}: got {got:?}, want {want:?}"));
    }
}

fn failures(r: &Report) -> Vec<String> {
    r.failures().iter().map(|c| format!("[{}] {} {}: {} vs {}", r.suite, c.label, c.instance, c.lhs, c.rhs)).collect()
}

fn suite(out: &mut Problems, t: Target, name: &str, cutoff: &Q, allow_skips: bool) {
    match run_suite(t, name, cutoff) {
        Ok(r) => {
            out.extend(failures(&r));
            if !allow_skips && r.count(Status::Skipped) > 0 {
                out.push(format!("[{name}] {} checks skipped", r.count(Status::Skipped)));
            }
            if r.count(Status::Pass) == 0 {
                out.push(format!("[{name}] ran no checks"));
            }
        }
        Err(e) => out.push(format!("[{name}] {e}")),
    }
}

fn delta(kappa: &Q) -> Q {
    (qi(4) + qi(3) * kappa) / (qi(6) + qi(6) * kappa)
}

fn criterion_1() -> Problems {
    let mut out = Vec::new();
    for (stem, k) in [("ruled_rotation_k1", qi(1)), ("ruled_rotation_k2", qi(2)), ("ruled_rotation_k1_2", q(1, 2))] {
        let f = fibration(stem);
        let m = &f.fiber;
        let fgen = m.h2.generator(0);
        let data = f.section_data().unwrap();
        let sigma = data.sigma_phi().unwrap();
        expect(&mut out, &format!("{stem} sigma_phi"), sigma.clone(), fgen.scale(&delta(&k)));
        expect(&mut out, &format!("{stem} sigma_phi label"), data.format_section(&sigma), format!("S- + ({})F", delta(&k)));
        let rho = data.rho(&qi(10)).unwrap();
        let t = m.index("T-").unwrap();
        expect(&mut out, &format!("{stem} rho"), rho, QHClass::monomial(m.unit(t), fgen.scale(&delta(&k))));
        expect(&mut out, &format!("{stem} Ic"), f.ic().unwrap().to_string(), "1 mod 2".to_string());
        let iu = -qi(4) / (qi(3) * (Q::one() + &k));
        let mut want = vec![Q::zero(); f.total.h2.rank()];
        want[f.total.h2.index("T").unwrap()] = iu.clone();
        expect(&mut out, &format!("{stem} Iu"), f.iu().unwrap(), want);
        expect(&mut out, &format!("{stem} Iu label"), f.format_iu(&f.iu().unwrap()), format!("({iu})T"));
    }
    out
}

fn criterion_2() -> Problems {
    let mut out = Vec::new();
    let f = fibration("ruled_rotation_k1");
    let (m, gw) = (&f.fiber, &f.fiber_gw);
    let ring = QuantumRing::new(m, gw);
    let cls = |s: &str| parse_class(s, m, &m.h2).unwrap();
    let (t, pt) = (m.index("T-").unwrap(), m.point);
    for i in 0..m.dim() {
        for j in 0..m.dim() {
            let got = ring.product_exact(&QHClass::basis(m.dim(), i), &QHClass::basis(m.dim(), j)).unwrap();
            let want = match (i, j) {
                (a, b) if a == t && b == t => cls("-pt + 1@e^{-F}"),
                (a, b) if (a, b) == (pt, t) || (a, b) == (t, pt) => cls("F@e^{-F}"),
                _ => QHClass::classical(m.cap(&m.unit(i), &m.unit(j)).unwrap()),
            };
            expect(&mut out, &format!("{} * {}", m.label(i), m.label(j)), got.format(m), want.format(m));
        }
    }
    let cutoff = qi(3) * &m.h2.omega[0];
    let assoc = ring.associativity_checks(&cutoff);
    if assoc.is_empty() {
        out.push("associativity suite is empty".into());
    }
    out.extend(assoc.iter().filter(|c| c.status != Status::Pass).map(|c| format!("assoc {}: {} vs {}", c.instance, c.lhs, c.rhs)));
    let d = delta(&qi(1));
    let rho = f.section_data().unwrap().rho(&cutoff).unwrap();
    let want = cls(&format!("F@e^{{({})F}} + T-@e^{{({})F}}", Q::one() - &d, Q::one() - &d));
    match ring.is_unit(&rho, &cutoff).unwrap() {
        Some(inv) => {
            expect(&mut out, "rho^-1", inv.format(m), want.truncate(&cutoff).format(m));
            let one = ring.product(&rho, &inv, &cutoff).unwrap();
            expect(&mut out, "rho * rho^-1", one.format(m), "1".to_string());
        }
        None => out.push("rho is not a unit".into()),
    }
    out
}

fn criterion_3() -> Problems {
    let mut out = Vec::new();
    let s = fixture("sphere");
    let (m, gw) = s.fiber();
    let f = product_fixture(m, gw).unwrap();
    expect(&mut out, "product fixture matches the shipped one", &f, &fibration("product_sphere"));
    let cutoff = qi(6);
    let data = f.section_data().unwrap();
    for i in 0..m.dim() {
        let e = QHClass::basis(m.dim(), i);
        expect(&mut out, &format!("Psi({})", m.label(i)), data.psi(&Exp::zero(), &e, &cutoff).unwrap(), e.clone());
    }
    for kappa in [qi(1), qi(2), q(1, 3)] {
        let checks = tensor_checks(&f, &kappa, &cutoff);
        if checks.is_empty() {
            out.push("no tensor checks".into());
        }
        out.extend(checks.iter().filter(|c| c.status != Status::Pass).map(|c| format!("tensor {} {}: {} vs {}", c.label, c.instance, c.lhs, c.rhs)));
    }
    for name in ["prop-gw", "axioms"] {
        suite(&mut out, Target::Fibration(&f), name, &cutoff, false);
    }
    out
}

fn criterion_4() -> Problems {
    let mut out = Vec::new();
    let cutoff = qi(6);
    for stem in ["sphere_rotation", "product_sphere", "ruled_rotation_k1"] {
        let f = fibration(stem);
        let m = &f.fiber;
        let data = f.section_data().unwrap();
        let precision = &cutoff + data.psi_margin(&Exp::zero()) + Q::one();
        let comp = data.mirror(&precision).and_then(|inv| data.compose(&inv));
        match comp {
            Ok(c) => {
                for i in 0..m.dim() {
                    let e = QHClass::basis(m.dim(), i);
                    match c.psi(&Exp::zero(), &e, &cutoff) {
                        Ok(x) => expect(&mut out, &format!("{stem} Psi_(phi # phi^-1)({})", m.label(i)), x, e),
                        Err(err) => out.push(format!("{stem} inverse composite: {err}")),
                    }
                }
            }
            Err(e) => out.push(format!("{stem} mirror/compose: {e}")),
        }
        let twice = data.compose(&data).unwrap();
        let r1 = data.rho(&cutoff).unwrap();
        let r2 = twice.rho(&cutoff).unwrap();
        let prod = data.fiber_ring().product(&r1, &r1, &cutoff).unwrap();
        expect(&mut out, &format!("{stem} rho(phi # phi)"), r2.format(m), prod.format(m));
        let sig = twice.sigma_phi().unwrap();
        expect(&mut out, &format!("{stem} sigma of composite"), sig, data.sigma_phi().unwrap().scale(&qi(2)));
    }
    let f = fibration("sphere_rotation");
    let m = &f.fiber;
    let data = f.section_data().unwrap();
    let rho = data.rho(&cutoff).unwrap();
    let half_a = m.h2.generator(0).scale(&q(1, 2));
    expect(&mut out, "sphere rotation rho", rho.clone(), QHClass::monomial(m.unit(m.point), half_a));
    let sq = data.fiber_ring().product(&rho, &rho, &cutoff).unwrap();
    expect(&mut out, "sphere rotation rho * rho", sq.format(m), "1".to_string());
    out
}

fn criterion_5() -> Problems {
    let mut out = Vec::new();
    let mut rng = StdRng::seed_from_u64(2024);
    let mut runs = 0;
    for n in [2, 3] {
        for _ in 0..60 {
            let syn = common::synthetic(n, &mut rng);
            if syn.nonzero_q == 0 {
                out.push("synthetic pairing has no q_ij".into());
            }
            match correct_splitting(&syn.fiber, &syn.total, &syn.iota, &syn.s_prime) {
                Ok(s) => out.extend(common::splitting_defects(&syn, &s)),
                Err(e) => out.push(format!("n = {n}: {e}")),
            }
            runs += 1;
        }
    }
    if runs < 100 {
        out.push(format!("only {runs} random pairings"));
    }
    let f = fibration("product_torus");
    match ring_split_check(&f, &qi(6)) {
        Ok(r) => {
            expect(&mut out, "torus product hypothesis", r.hypothesis, SplitHypothesis::VerticalVanishing);
            let checks = ["s_A(a) cap [M] = a", "s_A(a).s_A(b) = 0", "(s_A(a) cap s_A(b)).s_A(c) = 0"];
            for label in checks {
                let mine: Vec<_> = r.checks.iter().filter(|c| c.label == label).collect();
                if mine.is_empty() || mine.iter().any(|c| c.status != Status::Pass) {
                    out.push(format!("torus product: {label} not passing"));
                }
            }
            if !r.all_pass() {
                out.push("torus product: split checks fail".into());
            }
        }
        Err(e) => out.push(format!("torus product split: {e}")),
    }
    match ring_split_check(&fibration("ruled_rotation_k1"), &qi(6)) {
        Err(QhError::HypothesisFailed(why)) => {
            if !why.iter().any(|w| w.starts_with("vertical-vanishing: nonzero") && w.ends_with("class F")) {
                out.push(format!("ruled rotation failed for other reasons: {why:?}"));
            }
        }
        other => out.push(format!("ruled rotation split: {other:?}")),
    }
    out
}

/// Names of the suites that report a failure.
fn detecting_suites(t: Target, suites: &[&str], cutoff: &Q) -> Vec<String> {
    suites
        .iter()
        .filter(|s| match run_suite(t, s, cutoff) {
            Ok(r) => !r.all_pass(),
            Err(e) => !e.is_incomplete(),
        })
        .map(|s| s.to_string())
        .collect()
}

/// One copy per stored entry with that entry changed to another nonzero
/// value: `v + 1`, or `1` when `v = -1` (erasing an entry of an arity the
/// table does not claim complete only makes it unknown).
fn bump(t: &GWTable) -> Vec<(String, GWTable)> {
    t.entries()
        .into_iter()
        .map(|(arity, key, v)| {
            let mut c = t.clone();
            let w = if v == -Q::one() { Q::one() } else { &v + Q::one() };
            let label = format!("{arity}-point {:?} in {:?}: {v} -> {w}", key.0, key.1);
            c.set_raw(arity, key, w);
            (label, c)
        })
        .collect()
}

fn criterion_6() -> Problems {
    let mut out = Vec::new();
    let cutoff = qi(6);
    let mut mutants = 0;
    for stem in FIBRATIONS {
        let f = fibration(stem);
        suite(&mut out, Target::Fibration(&f), "wang", &cutoff, false);
        if !detecting_suites(Target::Fibration(&f), FIBRATION_SUITES, &cutoff).is_empty() {
            out.push(format!("{stem}: unmutated fixture fails"));
        }
        let mut variants: Vec<(String, FibrationModel)> = Vec::new();
        for (which, table) in [("fiber", &f.fiber_gw), ("vertical", &f.vertical), ("section", &f.section)] {
            for (label, t) in bump(table) {
                let mut g = f.clone();
                match which {
                    "fiber" => g.fiber_gw = t,
                    "vertical" => g.vertical = t,
                    _ => g.section = t,
                }
                variants.push((format!("{which} {label}"), g));
            }
        }
        for a in 0..f.fiber.dim() {
            let mut g = f.clone();
            g.iota[a] = linalg::zero_vec(f.total.dim());
            variants.push((format!("iota row {} killed", f.fiber.label(a)), g));
        }
        for (label, g) in variants {
            mutants += 1;
            if detecting_suites(Target::Fibration(&g), FIBRATION_SUITES, &cutoff).is_empty() {
                out.push(format!("{stem}: undetected mutation {label}"));
            }
        }
    }
    for stem in MANIFOLDS {
        let fx = fixture(stem);
        let (m, gw) = fx.fiber();
        for (label, t) in bump(gw) {
            mutants += 1;
            if detecting_suites(Target::Manifold(m, &t), MANIFOLD_SUITES, &cutoff).is_empty() {
                out.push(format!("{stem}: undetected mutation {label}"));
            }
        }
    }
    if mutants == 0 {
        out.push("no mutations generated".into());
    }
    out
}

fn criterion_7() -> Problems {
    let mut out = Vec::new();
    let mut f = fibration("product_sphere");
    expect(&mut out, "bound at kappa = 2", f.nonsqueezing_bound(&qi(2)).unwrap(), Nonsqueeze::Bound(qi(2)));
    let sigma = f.section_data().unwrap().sigma_phi().unwrap();
    let total: &ManifoldModel = &f.total;
    let mc = total.index("i(1)").unwrap();
    let (key, _, _) = canonical(total, &[mc, mc, total.index("i(pt)").unwrap()]);
    if f.section.map(3).get(&(key.clone(), sigma.clone())).is_none() {
        out.push("critical invariant is not stored".into());
    }
    f.section.set_raw(3, (key, sigma), Q::zero());
    match f.nonsqueezing_bound(&qi(2)).unwrap() {
        Nonsqueeze::None(_) => {}
        other => out.push(format!("zeroed invariant still gives {other:?}")),
    }
    out
}

fn main() {
    let criteria: [(&str, fn() -> Problems); 7] = [
        ("ruled rotation closed forms at kappa in {1, 2, 1/2}", criterion_1),
        ("fiber quantum ring, associativity and unit inverse", criterion_2),
        ("trivial bundle laws on S2 x S2", criterion_3),
        ("composition and group laws", criterion_4),
        ("splitting correction and ring splitting", criterion_5),
        ("Wang suites and mutation detection", criterion_6),
        ("nonsqueezing bound", criterion_7),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let problems = run();
        let status = if problems.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {}: {status}  {name}", i + 1);
        for p in &problems {
            println!("    {p}");
        }
        if !problems.is_empty() {
            failed += 1;
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
