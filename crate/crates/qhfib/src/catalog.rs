//! Built-in models: the two-sphere, the torus, the nontrivial sphere bundle
//! over the torus and two fibrations over S² with those fibers.

use crate::fibration::FibrationModel;
use crate::fixture::FixtureDocument;
use crate::gw::{Bound, Completeness, GWTable, TableKind};
use crate::linalg::{self, Mat};
use crate::manifold::{koszul, BasisElement, ManifoldModel};
use crate::novikov::{Exp, H2Lattice};
use crate::rational::{q, qi, Q};
use num_traits::{One, Zero};

type Tensor = Vec<Vec<Vec<Q>>>;

struct Layout<'a> {
    name: &'a str,
    n: u32,
    basis: &'a [(&'a str, u32)],
    pairing: &'a [(&'a str, &'a str, Q)],
    triple: &'a [(&'a str, &'a str, Vec<(&'a str, Q)>)],
}

fn pos(basis: &[(&str, u32)], l: &str) -> usize {
    basis.iter().position(|b| b.0 == l).unwrap_or_else(|| panic!("no basis element {l}"))
}

/// Fills in graded-symmetric partners and the unit rows of the fundamental class.
fn assemble(s: &Layout) -> (Vec<BasisElement>, Mat, Tensor) {
    let d = s.basis.len();
    let deg = |i: usize| s.basis[i].1;
    let mut g = linalg::zeros(d, d);
    for (a, b, v) in s.pairing {
        let (i, j) = (pos(s.basis, a), pos(s.basis, b));
        g[i][j] = v.clone();
        g[j][i] = v * koszul(deg(i), deg(j));
    }
    let top = s.basis.iter().position(|b| b.1 == 2 * s.n).expect("fundamental class");
    let mut t: Tensor = vec![vec![linalg::zero_vec(d); d]; d];
    for x in 0..d {
        t[top][x] = linalg::unit_vec(d, x);
        t[x][top] = linalg::unit_vec(d, x);
    }
    for (a, b, terms) in s.triple {
        let (i, j) = (pos(s.basis, a), pos(s.basis, b));
        let mut v = linalg::zero_vec(d);
        for (l, c) in terms {
            v[pos(s.basis, l)] += c;
        }
        t[j][i] = v.iter().map(|x| x * koszul(deg(i), deg(j))).collect();
        t[i][j] = v;
    }
    let basis = s.basis.iter().map(|(l, k)| BasisElement { label: l.to_string(), degree: *k }).collect();
    (basis, g, t)
}

fn build(s: Layout, h2: H2Lattice, min_chern: u64, realized_by: &[&str]) -> ManifoldModel {
    let (basis, g, t) = assemble(&s);
    let labels: Vec<String> = realized_by.iter().map(|x| x.to_string()).collect();
    ManifoldModel::new(s.name, s.n, basis, g, Some(t), h2, min_chern)
        .and_then(|m| m.with_realization(&labels))
        .expect("catalog model")
}

fn lattice(gens: &[&str], omega: Vec<Q>, c1: Vec<Q>, spherical: &[bool]) -> H2Lattice {
    H2Lattice::new(gens.iter().map(|g| g.to_string()).collect(), omega, c1, spherical.to_vec()).expect("lattice")
}

fn put(t: &mut GWTable, m: &ManifoldModel, labels: &[&str], b: &Exp, v: Q) {
    let idx: Vec<usize> = labels.iter().map(|l| m.index(l).expect("label")).collect();
    t.insert(m, &idx, b.clone(), v).expect("consistent entry");
}

/// Two- and three-point entries complete; nothing is claimed about four-point ones.
fn complete() -> Completeness {
    Completeness { three: Some(Bound::Infinite), two: Some(Bound::Infinite), four: None }
}

/// S² with `ω(A) = area`; basis `1`, `pt`.
pub fn sphere(area: &Q) -> ManifoldModel {
    let basis = [("1", 2), ("pt", 0)];
    let layout = Layout { name: "S2", n: 1, basis: &basis, pairing: &[("1", "pt", qi(1))], triple: &[] };
    build(layout, lattice(&["A"], vec![area.clone()], vec![qi(2)], &[true]), 2, &["1"])
}

/// `n(pt,pt,pt; A) = n(pt,pt; A) = 1`, nothing else.
pub fn sphere_gw(m: &ManifoldModel) -> GWTable {
    let mut t = GWTable::curve(complete());
    let a = m.h2.generator(0);
    put(&mut t, m, &["pt", "pt", "pt"], &a, qi(1));
    put(&mut t, m, &["pt", "pt"], &a, qi(1));
    t
}

/// T² of area 1; it carries no spherical classes.
pub fn torus() -> ManifoldModel {
    let basis = [("1", 2), ("a", 1), ("b", 1), ("pt", 0)];
    let layout = Layout {
        name: "T2",
        n: 1,
        basis: &basis,
        pairing: &[("1", "pt", qi(1)), ("a", "b", qi(1))],
        triple: &[("a", "b", vec![("pt", qi(1))])],
    };
    build(layout, lattice(&["T"], vec![qi(1)], vec![qi(0)], &[false]), 0, &["1"])
}

pub fn torus_gw() -> GWTable {
    GWTable::curve(complete())
}

/// The nontrivial S²-bundle over T² with `ω(F) = 2`, `ω(T₋) = κ`.
pub fn ruled_fiber(kappa: &Q) -> ManifoldModel {
    let basis = [("1", 4), ("F", 2), ("T-", 2), ("pt", 0)];
    let layout = Layout {
        name: "ruled",
        n: 2,
        basis: &basis,
        pairing: &[("1", "pt", qi(1)), ("F", "T-", qi(1)), ("T-", "T-", qi(-1))],
        triple: &[("F", "T-", vec![("pt", qi(1))]), ("T-", "T-", vec![("pt", qi(-1))])],
    };
    let h2 = lattice(&["F", "T"], vec![qi(2), kappa.clone()], vec![qi(2), qi(-1)], &[true, false]);
    build(layout, h2, 2, &["F", "T-"])
}

/// Only the fiber class `F` carries curves: `n(pt,T₋,T₋;F) = n(pt,T₋;F) = 1`.
pub fn ruled_fiber_gw(m: &ManifoldModel) -> GWTable {
    let mut t = GWTable::curve(complete());
    let f = m.h2.generator(0);
    put(&mut t, m, &["pt", "T-", "T-"], &f, qi(1));
    put(&mut t, m, &["pt", "T-"], &f, qi(1));
    t
}

/// `ε` with `u_φ³ = 0`.
pub fn ruled_epsilon(kappa: &Q) -> Q {
    -Q::one() / (qi(3) * (Q::one() + kappa))
}

/// The loop rotating the fibers of the ruled surface, fixing `T₊` and `T₋`.
pub fn ruled_total(kappa: &Q) -> FibrationModel {
    let fiber = ruled_fiber(kappa);
    let fiber_gw = ruled_fiber_gw(&fiber);
    let basis = [("P", 6), ("Lam", 4), ("M", 4), ("Nu", 4), ("F", 2), ("T-", 2), ("S-", 2), ("pt", 0)];
    let h4 = ["Lam", "M", "Nu"];
    let h2 = ["F", "T-", "S-"];
    let values = [[0, 1, 0], [0, 0, 1], [2, -1, -1]];
    let mut pairing = vec![("P", "pt", qi(1))];
    let mut triple = vec![
        ("Lam", "M", vec![("F", qi(1))]),
        ("Lam", "Nu", vec![("S-", qi(2)), ("F", qi(1))]),
        ("M", "Nu", vec![("T-", qi(2)), ("F", qi(1))]),
        ("Nu", "Nu", vec![("F", qi(2))]),
    ];
    for (x, row) in h4.iter().zip(values) {
        for (c, v) in h2.iter().zip(row) {
            if v != 0 {
                pairing.push((x, c, qi(v)));
                triple.push((x, c, vec![("pt", qi(v))]));
            }
        }
    }
    let eps = ruled_epsilon(kappa);
    let lat = lattice(
        &["F", "T", "S-"],
        vec![qi(2), kappa.clone(), &eps - Q::one()],
        vec![qi(2), qi(-1), qi(-1)],
        &[true, false, true],
    );
    let layout = Layout { name: "ruled-rotation", n: 3, basis: &basis, pairing: &pairing, triple: &triple };
    let total = build(layout, lat, 2, &["F", "T-", "S-"]);
    let v = |xs: &[(&str, Q)]| {
        let mut out = linalg::zero_vec(total.dim());
        for (l, c) in xs {
            out[total.index(l).unwrap()] += c;
        }
        out
    };
    let iota = vec![v(&[("M", qi(1))]), v(&[("F", qi(1))]), v(&[("T-", qi(1))]), v(&[("pt", qi(1))])];
    let half = q(1, 2);
    let splitting = vec![
        v(&[("P", qi(1))]),
        v(&[("Lam", qi(1))]),
        v(&[("Nu", half.clone()), ("Lam", -&half), ("M", half.clone())]),
        v(&[("S-", qi(1))]),
    ];
    let f = fiber.h2.generator(0);
    let mut vertical = GWTable::curve(complete());
    put(&mut vertical, &total, &["pt", "Nu", "Nu"], &f, qi(4));
    put(&mut vertical, &total, &["T-", "S-", "Nu"], &f, qi(2));
    put(&mut vertical, &total, &["pt", "Nu"], &f, qi(2));
    put(&mut vertical, &total, &["T-", "S-"], &f, qi(1));
    let section_complete = Completeness { three: None, two: Some(Bound::Infinite), four: None };
    let mut section = GWTable::new(TableKind::Section { u_ref: Q::zero(), c_ref: Q::zero() }, section_complete);
    let zero = Exp::zero();
    for (a, b, x) in [("M", "F", 1), ("M", "T-", -1), ("M", "S-", -1), ("Nu", "F", -1), ("Nu", "T-", 1), ("Nu", "S-", 1)] {
        put(&mut section, &total, &[a, b], &zero, qi(x));
    }
    put(&mut section, &total, &["T-", "pt"], &f, qi(1));
    // [M] · σ = 1 on every section class
    for ((idx, k), v) in section.two_point.clone() {
        let labels = [total.label(idx[0]), total.label(idx[1]), "M"];
        put(&mut section, &total, &labels, &k, v);
    }
    let sigma_ref = vec![qi(0), qi(0), qi(1)];
    FibrationModel::new("ruled-rotation", fiber, fiber_gw, total, iota, splitting, sigma_ref, vertical, section)
        .expect("ruled total space")
}

/// The first Hirzebruch surface, the fibration of one full rotation of S² of
/// area `area`; `E` is the exceptional section.
pub fn sphere_rotation(area: &Q) -> FibrationModel {
    let fiber = sphere(area);
    let fiber_gw = sphere_gw(&fiber);
    let basis = [("P", 4), ("A", 2), ("E", 2), ("pt", 0)];
    let layout = Layout {
        name: "sphere-rotation",
        n: 2,
        basis: &basis,
        pairing: &[("P", "pt", qi(1)), ("A", "E", qi(1)), ("E", "E", qi(-1))],
        triple: &[("A", "E", vec![("pt", qi(1))]), ("E", "E", vec![("pt", qi(-1))])],
    };
    let lat = lattice(&["A", "E"], vec![area.clone(), -area / qi(2)], vec![qi(2), qi(-1)], &[true, true]);
    let total = build(layout, lat, 1, &["A", "E"]);
    let (p, a, e, pt) = (total.index("P").unwrap(), total.index("A").unwrap(), total.index("E").unwrap(), total.point);
    let iota = vec![total.unit(a), total.unit(pt)];
    let mut s_pt = total.unit(e);
    s_pt[a] = q(1, 2);
    let splitting = vec![total.unit(p), s_pt];
    let fa = fiber.h2.generator(0);
    let mut vertical = GWTable::curve(complete());
    put(&mut vertical, &total, &["E", "E", "pt"], &fa, qi(1));
    put(&mut vertical, &total, &["E", "pt"], &fa, qi(1));
    let mut section = GWTable::new(TableKind::Section { u_ref: Q::zero(), c_ref: Q::zero() }, complete());
    let zero = Exp::zero();
    for (x, y, v) in [("A", "A", 1), ("A", "E", -1), ("E", "E", 1)] {
        put(&mut section, &total, &[x, y], &zero, qi(v));
    }
    put(&mut section, &total, &["pt", "pt"], &fa, qi(1));
    for (l, v) in [(["A", "A", "A"], 1), (["A", "A", "E"], -1), (["A", "E", "E"], 1), (["E", "E", "E"], -1)] {
        put(&mut section, &total, &l, &zero, qi(v));
    }
    put(&mut section, &total, &["A", "pt", "pt"], &fa, qi(1));
    FibrationModel::new("sphere-rotation", fiber, fiber_gw, total, iota, splitting, vec![qi(0), qi(1)], vertical, section)
        .expect("sphere rotation")
}

/// Every model shipped under `fixtures/`, by file stem.
pub fn shipped() -> crate::error::Result<Vec<(String, FixtureDocument)>> {
    let s = sphere(&qi(1));
    let t = torus();
    let r = ruled_fiber(&qi(1));
    let mut out = vec![
        ("sphere".to_string(), FixtureDocument::from_manifold(&s, &sphere_gw(&s))?),
        ("torus".to_string(), FixtureDocument::from_manifold(&t, &torus_gw())?),
        ("ruled_fiber".to_string(), FixtureDocument::from_manifold(&r, &ruled_fiber_gw(&r))?),
    ];
    for (stem, k) in [("ruled_rotation_k1", qi(1)), ("ruled_rotation_k2", qi(2)), ("ruled_rotation_k1_2", q(1, 2))] {
        out.push((stem.to_string(), FixtureDocument::from_fibration(&ruled_total(&k))?));
    }
    out.push(("sphere_rotation".to_string(), FixtureDocument::from_fibration(&sphere_rotation(&qi(1)))?));
    let product_sphere = crate::fibration::product_fixture(&s, &sphere_gw(&s))?;
    out.push(("product_sphere".to_string(), FixtureDocument::from_fibration(&product_sphere)?));
    let product_torus = crate::fibration::product_fixture(&t, &torus_gw())?;
    out.push(("product_torus".to_string(), FixtureDocument::from_fibration(&product_torus)?));
    Ok(out)
}
