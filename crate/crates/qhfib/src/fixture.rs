//! JSON fixture documents. Every number is an exact string such as `"7/12"`;
//! basis elements are referred to by label.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::error::{QhError, Result};
use crate::fibration::FibrationModel;
use crate::gw::{Bound, Completeness, GWTable, TableKind};
use crate::linalg::{self, Mat};
use crate::manifold::{BasisElement, ManifoldModel};
use crate::novikov::{Exp, H2Lattice};
use crate::rational::{fmt_q, parse_q, Q};
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureDocument {
    pub manifold: ManifoldDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gw: Option<TableDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fibration: Option<FibrationDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisDoc {
    pub label: String,
    pub degree: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct H2Doc {
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c1: Option<Vec<String>>,
    pub spherical: Vec<bool>,
    /// Degree-2 basis labels carrying the generators.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub realized_by: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldDoc {
    pub name: String,
    pub n: u32,
    pub basis: Vec<BasisDoc>,
    /// `[a, b, a·b]`.
    pub pairing: Vec<[String; 3]>,
    /// `[a, b, c, coefficient of c in a ∩ b]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triple: Option<Vec<[String; 4]>>,
    pub h2: H2Doc,
    #[serde(rename = "N")]
    pub min_chern: String,
}

/// `"inf"`, an energy, or per-arity bounds (absent: nothing assumed).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CompletenessDoc {
    Uniform(String),
    PerArity {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        three: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        two: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        four: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryDoc {
    pub args: Vec<String>,
    /// Coordinates of the class in the generators of the fiber lattice.
    pub class: Vec<String>,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableDoc {
    pub complete_below: CompletenessDoc,
    #[serde(default)]
    pub three_point: Vec<EntryDoc>,
    #[serde(default)]
    pub two_point: Vec<EntryDoc>,
    #[serde(default)]
    pub four_point_chi: Vec<EntryDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FibrationDoc {
    pub name: String,
    pub total_basis: Vec<BasisDoc>,
    /// Row `a` is `ι(e_a)` in the total basis.
    pub iota: Vec<Vec<String>>,
    /// Row `a` is `s(e_a)` in the total basis.
    pub splitting: Vec<Vec<String>>,
    pub total_pairing: Vec<[String; 3]>,
    pub total_triple: Vec<[String; 4]>,
    pub u_phi: Vec<String>,
    pub c_phi: Vec<String>,
    pub sigma_ref: Vec<String>,
    pub h2_total: H2Doc,
    #[serde(rename = "N_total")]
    pub min_chern_total: String,
    /// Invariants of `P` in fiber classes.
    pub gw_fiber: TableDoc,
    /// Invariants of `P` in section classes, keyed by the offset from `sigma_ref`.
    pub gw_section: TableDoc,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Fixture {
    Manifold { m: ManifoldModel, gw: GWTable },
    Fibration(Box<FibrationModel>),
}

impl Fixture {
    pub fn fiber(&self) -> (&ManifoldModel, &GWTable) {
        match self {
            Fixture::Manifold { m, gw } => (m, gw),
            Fixture::Fibration(f) => (&f.fiber, &f.fiber_gw),
        }
    }

    pub fn fibration(&self) -> Result<&FibrationModel> {
        match self {
            Fixture::Fibration(f) => Ok(f),
            Fixture::Manifold { m, .. } => Err(QhError::Malformed(format!("{} has no fibration section", m.name))),
        }
    }
}

fn pq(path: &str, s: &str) -> Result<Q> {
    parse_q(s).map_err(|e| QhError::Parse(format!("{path}: {e}")))
}

fn pqs(path: &str, v: &[String]) -> Result<Vec<Q>> {
    v.iter().enumerate().map(|(i, s)| pq(&format!("{path}[{i}]"), s)).collect()
}

fn strs(v: &[Q]) -> Vec<String> {
    v.iter().map(fmt_q).collect()
}

fn basis_of(v: &[BasisDoc]) -> Vec<BasisElement> {
    v.iter().map(|b| BasisElement { label: b.label.clone(), degree: b.degree }).collect()
}

fn basis_doc(m: &ManifoldModel) -> Vec<BasisDoc> {
    m.basis.iter().map(|b| BasisDoc { label: b.label.clone(), degree: b.degree }).collect()
}

fn index(path: &str, basis: &[BasisElement], l: &str) -> Result<usize> {
    basis.iter().position(|b| b.label == l).ok_or_else(|| QhError::Parse(format!("{path}: unknown basis label {l:?}")))
}

fn pairing_of(path: &str, basis: &[BasisElement], rows: &[[String; 3]]) -> Result<Mat> {
    let mut g = linalg::zeros(basis.len(), basis.len());
    for (k, [a, b, v]) in rows.iter().enumerate() {
        let p = format!("{path}[{k}]");
        g[index(&p, basis, a)?][index(&p, basis, b)?] = pq(&p, v)?;
    }
    Ok(g)
}

fn triple_of(path: &str, basis: &[BasisElement], rows: &[[String; 4]]) -> Result<Vec<Vec<Vec<Q>>>> {
    let d = basis.len();
    let mut t = vec![vec![linalg::zero_vec(d); d]; d];
    for (k, [a, b, c, v]) in rows.iter().enumerate() {
        let p = format!("{path}[{k}]");
        t[index(&p, basis, a)?][index(&p, basis, b)?][index(&p, basis, c)?] = pq(&p, v)?;
    }
    Ok(t)
}

fn pairing_doc(m: &ManifoldModel) -> Vec<[String; 3]> {
    let mut out = Vec::new();
    for i in 0..m.dim() {
        for j in 0..m.dim() {
            if !m.pairing[i][j].is_zero() {
                out.push([m.label(i).into(), m.label(j).into(), fmt_q(&m.pairing[i][j])]);
            }
        }
    }
    out
}

fn triple_doc(m: &ManifoldModel) -> Option<Vec<[String; 4]>> {
    let t = m.triple.as_ref()?;
    let mut out = Vec::new();
    for i in 0..m.dim() {
        for j in 0..m.dim() {
            for k in 0..m.dim() {
                if !t[i][j][k].is_zero() {
                    out.push([m.label(i).into(), m.label(j).into(), m.label(k).into(), fmt_q(&t[i][j][k])]);
                }
            }
        }
    }
    Some(out)
}

fn lattice_of(path: &str, h: &H2Doc, omega: &[String], c1: &[String]) -> Result<H2Lattice> {
    Ok(H2Lattice::new(
        h.generators.clone(),
        pqs(&format!("{path}.omega"), omega)?,
        pqs(&format!("{path}.c1"), c1)?,
        h.spherical.clone(),
    )?)
}

fn manifold_of(d: &ManifoldDoc) -> Result<ManifoldModel> {
    let basis = basis_of(&d.basis);
    let pairing = pairing_of("manifold.pairing", &basis, &d.pairing)?;
    let triple = d.triple.as_ref().map(|t| triple_of("manifold.triple", &basis, t)).transpose()?;
    let (omega, c1) = match (&d.h2.omega, &d.h2.c1) {
        (Some(o), Some(c)) => (o, c),
        _ => return Err(QhError::Parse("manifold.h2: omega and c1 are required".into())),
    };
    let h2 = lattice_of("manifold.h2", &d.h2, omega, c1)?;
    let n = min_chern(&d.min_chern, "manifold.N")?;
    let m = ManifoldModel::new(d.name.clone(), d.n, basis, pairing, triple, h2, n)?;
    match &d.h2.realized_by {
        Some(r) => m.with_realization(r),
        None => Ok(m),
    }
}

fn min_chern(s: &str, path: &str) -> Result<u64> {
    s.trim().parse().map_err(|_| QhError::Parse(format!("{path}: expected a nonnegative integer, got {s:?}")))
}

fn bound_of(path: &str, s: &str) -> Result<Bound> {
    if s.trim() == "inf" {
        Ok(Bound::Infinite)
    } else {
        Ok(Bound::Finite(pq(path, s)?))
    }
}

fn bound_doc(b: &Bound) -> String {
    match b {
        Bound::Infinite => "inf".into(),
        Bound::Finite(q) => fmt_q(q),
    }
}

fn completeness_of(path: &str, c: &CompletenessDoc) -> Result<Completeness> {
    let opt = |x: &Option<String>, a: &str| x.as_ref().map(|s| bound_of(&format!("{path}.{a}"), s)).transpose();
    Ok(match c {
        CompletenessDoc::Uniform(s) => {
            let b = bound_of(path, s)?;
            Completeness { three: Some(b.clone()), two: Some(b), four: None }
        }
        CompletenessDoc::PerArity { three, two, four } => {
            Completeness { three: opt(three, "three")?, two: opt(two, "two")?, four: opt(four, "four")? }
        }
    })
}

fn completeness_doc(c: &Completeness) -> CompletenessDoc {
    match (&c.three, &c.two, &c.four) {
        (Some(a), Some(b), None) if a == b => CompletenessDoc::Uniform(bound_doc(a)),
        _ => CompletenessDoc::PerArity {
            three: c.three.as_ref().map(bound_doc),
            two: c.two.as_ref().map(bound_doc),
            four: c.four.as_ref().map(bound_doc),
        },
    }
}

/// Reads a table whose arguments are basis elements of `m` and whose classes
/// are coordinates in `lat`.
fn table_of(path: &str, d: &TableDoc, m: &ManifoldModel, lat: &H2Lattice, kind: TableKind) -> Result<GWTable> {
    let mut t = GWTable::new(kind, completeness_of(&format!("{path}.complete_below"), &d.complete_below)?);
    for (name, arity, rows) in [("three_point", 3, &d.three_point), ("two_point", 2, &d.two_point), ("four_point_chi", 4, &d.four_point_chi)] {
        for (k, e) in rows.iter().enumerate() {
            let p = format!("{path}.{name}[{k}]");
            if e.args.len() != arity {
                return Err(QhError::Parse(format!("{p}: expected {arity} arguments")));
            }
            if e.class.len() != lat.rank() {
                return Err(QhError::Parse(format!("{p}: class needs {} coordinates", lat.rank())));
            }
            let idx = e.args.iter().map(|a| index(&p, &m.basis, a)).collect::<Result<Vec<_>>>()?;
            let b = lat.key(&pqs(&format!("{p}.class"), &e.class)?);
            t.insert(m, &idx, b, pq(&format!("{p}.value"), &e.value)?).map_err(|e| QhError::Parse(format!("{p}: {e}")))?;
        }
    }
    Ok(t)
}

fn table_doc(t: &GWTable, m: &ManifoldModel, lat: &H2Lattice) -> Result<TableDoc> {
    let rows = |map: &BTreeMap<(Vec<usize>, Exp), Q>| -> Result<Vec<EntryDoc>> {
        map.iter()
            .map(|((idx, b), v)| {
                let coords =
                    lat.rep(b).ok_or_else(|| QhError::Malformed(format!("class <ω={}, c₁={}> is not in the lattice", b.omega, b.chern)))?;
                Ok(EntryDoc { args: idx.iter().map(|&i| m.label(i).to_string()).collect(), class: strs(&coords), value: fmt_q(v) })
            })
            .collect()
    };
    Ok(TableDoc {
        complete_below: completeness_doc(&t.complete),
        three_point: rows(&t.three_point)?,
        two_point: rows(&t.two_point)?,
        four_point_chi: rows(&t.four_point_chi)?,
    })
}

fn h2_doc(m: &ManifoldModel, with_values: bool) -> H2Doc {
    let l = &m.h2;
    H2Doc {
        generators: l.generators.clone(),
        omega: with_values.then(|| strs(&l.omega)),
        c1: with_values.then(|| strs(&l.c1)),
        spherical: l.spherical.clone(),
        realized_by: m.realized_by.as_ref().map(|r| r.iter().map(|&i| m.label(i).to_string()).collect()),
    }
}

fn manifold_doc(m: &ManifoldModel) -> ManifoldDoc {
    ManifoldDoc {
        name: m.name.clone(),
        n: m.n,
        basis: basis_doc(m),
        pairing: pairing_doc(m),
        triple: triple_doc(m),
        h2: h2_doc(m, true),
        min_chern: m.min_chern.to_string(),
    }
}

fn matrix_of(path: &str, rows: &[Vec<String>], cols: usize) -> Result<Mat> {
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            if r.len() != cols {
                return Err(QhError::Parse(format!("{path}[{i}]: expected {cols} entries")));
            }
            pqs(&format!("{path}[{i}]"), r)
        })
        .collect()
}

impl FixtureDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let inner = e.inner();
            QhError::Parse(format!("{} (line {}, column {}) at {}", inner, inner.line(), inner.column(), e.path()))
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("fixture documents serialize")
    }

    pub fn from_manifold(m: &ManifoldModel, gw: &GWTable) -> Result<Self> {
        Ok(FixtureDocument { manifold: manifold_doc(m), gw: Some(table_doc(gw, m, &m.h2)?), fibration: None })
    }

    pub fn from_fibration(f: &FibrationModel) -> Result<Self> {
        let p = &f.total;
        let lat = &f.fiber.h2;
        let fib = FibrationDoc {
            name: f.name.clone(),
            total_basis: basis_doc(p),
            iota: f.iota.iter().map(|r| strs(r)).collect(),
            splitting: f.splitting.iter().map(|r| strs(r)).collect(),
            total_pairing: pairing_doc(p),
            total_triple: triple_doc(p).ok_or(QhError::MissingTripleData)?,
            u_phi: strs(&p.h2.omega),
            c_phi: strs(&p.h2.c1),
            sigma_ref: strs(&f.sigma_ref),
            h2_total: h2_doc(p, false),
            min_chern_total: p.min_chern.to_string(),
            gw_fiber: table_doc(&f.vertical, p, lat)?,
            gw_section: table_doc(&f.section, p, lat)?,
        };
        Ok(FixtureDocument {
            manifold: manifold_doc(&f.fiber),
            gw: Some(table_doc(&f.fiber_gw, &f.fiber, lat)?),
            fibration: Some(fib),
        })
    }

    pub fn load(&self) -> Result<Fixture> {
        let m = manifold_of(&self.manifold)?;
        let gw = match &self.gw {
            Some(t) => table_of("gw", t, &m, &m.h2, TableKind::Curve)?,
            None => GWTable::curve(Completeness::none()),
        };
        let Some(fd) = &self.fibration else {
            return Ok(Fixture::Manifold { m, gw });
        };
        let basis = basis_of(&fd.total_basis);
        let pd = basis.len();
        let pairing = pairing_of("fibration.total_pairing", &basis, &fd.total_pairing)?;
        let triple = triple_of("fibration.total_triple", &basis, &fd.total_triple)?;
        let h2 = lattice_of("fibration.h2_total", &fd.h2_total, &fd.u_phi, &fd.c_phi)?;
        let n = min_chern(&fd.min_chern_total, "fibration.N_total")?;
        let mut p = ManifoldModel::new(fd.name.clone(), m.n + 1, basis, pairing, Some(triple), h2, n)?;
        if let Some(r) = &fd.h2_total.realized_by {
            p = p.with_realization(r)?;
        }
        let iota = matrix_of("fibration.iota", &fd.iota, pd)?;
        let splitting = matrix_of("fibration.splitting", &fd.splitting, pd)?;
        let sigma_ref = pqs("fibration.sigma_ref", &fd.sigma_ref)?;
        let vertical = table_of("fibration.gw_fiber", &fd.gw_fiber, &p, &m.h2, TableKind::Curve)?;
        let section = table_of(
            "fibration.gw_section",
            &fd.gw_section,
            &p,
            &m.h2,
            TableKind::Section { u_ref: Q::zero(), c_ref: Q::zero() },
        )?;
        let f = FibrationModel::new(fd.name.clone(), m, gw, p, iota, splitting, sigma_ref, vertical, section)?;
        Ok(Fixture::Fibration(Box::new(f)))
    }
}

pub fn load_path(path: &std::path::Path) -> Result<Fixture> {
    let text = std::fs::read_to_string(path).map_err(|e| QhError::Parse(format!("{}: {e}", path.display())))?;
    FixtureDocument::parse(&text)?.load()
}
