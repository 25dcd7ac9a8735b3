//! Sparse tables of genus-zero Gromov–Witten invariants.
//!
//! Entries are keyed by a sorted tuple of basis indices and a curve class.
//! Permuting arguments costs the Koszul sign `(−1)^{|a||b|}` per adjacent swap.
//! An absent entry reads as zero when its energy is within the declared
//! completeness bound, and as an error otherwise.

use crate::error::{QhError, Result};
use crate::manifold::ManifoldModel;
use crate::novikov::Exp;
use crate::rational::Q;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Bound {
    Finite(Q),
    Infinite,
}

impl Bound {
    pub fn covers(&self, energy: &Q) -> bool {
        match self {
            Bound::Infinite => true,
            Bound::Finite(l) => energy <= l,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Infinite => write!(f, "inf"),
            Bound::Finite(q) => write!(f, "{q}"),
        }
    }
}

fn bound_text(b: &Option<Bound>) -> String {
    b.as_ref().map_or_else(|| "none".to_string(), |b| b.to_string())
}

/// Completeness per arity; `None` means nothing may be assumed about absent entries.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Completeness {
    pub three: Option<Bound>,
    pub two: Option<Bound>,
    pub four: Option<Bound>,
}

impl Completeness {
    pub fn uniform(b: Bound) -> Self {
        Completeness { three: Some(b.clone()), two: Some(b.clone()), four: Some(b) }
    }

    pub fn none() -> Self {
        Self::default()
    }

    fn get(&self, arity: usize) -> &Option<Bound> {
        match arity {
            2 => &self.two,
            3 => &self.three,
            _ => &self.four,
        }
    }

    /// Text form of the bounds, for reports.
    pub fn summary(&self) -> String {
        let all = [&self.three, &self.two, &self.four];
        if all.iter().all(|b| *b == all[0]) {
            bound_text(all[0])
        } else {
            format!("3:{} 2:{} 4:{}", bound_text(&self.three), bound_text(&self.two), bound_text(&self.four))
        }
    }
}

/// How classes in the table relate to energy, grading and the classical part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TableKind {
    /// Classes `B` in the manifold itself (or fiber classes `ι(B)` in a total space).
    Curve,
    /// Section classes `σ_ref + ι(B)`; keys are the offsets `B`.
    Section { u_ref: Q, c_ref: Q },
}

pub type Key = (Vec<usize>, Exp);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GWTable {
    pub kind: TableKind,
    pub three_point: BTreeMap<Key, Q>,
    pub two_point: BTreeMap<Key, Q>,
    pub four_point_chi: BTreeMap<Key, Q>,
    pub complete: Completeness,
}

/// Sorts `idx`, returning the accumulated Koszul sign and whether a
/// repeated odd class forces the value to vanish.
pub fn canonical(m: &ManifoldModel, idx: &[usize]) -> (Vec<usize>, Q, bool) {
    let mut v = idx.to_vec();
    let mut sign = Q::one();
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                if (m.degree(v[j]) * m.degree(v[j + 1])) % 2 == 1 {
                    sign = -sign;
                }
                v.swap(j, j + 1);
            }
        }
    }
    let forced_zero = v.windows(2).any(|w| w[0] == w[1] && m.degree(w[0]) % 2 == 1);
    (v, sign, forced_zero)
}

impl GWTable {
    pub fn new(kind: TableKind, complete: Completeness) -> Self {
        GWTable {
            kind,
            three_point: BTreeMap::new(),
            two_point: BTreeMap::new(),
            four_point_chi: BTreeMap::new(),
            complete,
        }
    }

    pub fn curve(complete: Completeness) -> Self {
        Self::new(TableKind::Curve, complete)
    }

    pub fn is_section(&self) -> bool {
        matches!(self.kind, TableKind::Section { .. })
    }

    /// Energy of a class in the table: `ω(B)`, or `u_φ(σ_ref + ι(B))` for sections.
    pub fn energy(&self, b: &Exp) -> Q {
        match &self.kind {
            TableKind::Curve => b.omega.clone(),
            TableKind::Section { u_ref, .. } => u_ref + &b.omega,
        }
    }

    /// First Chern class of the total tangent bundle on the class.
    pub fn chern_total(&self, b: &Exp) -> Q {
        match &self.kind {
            TableKind::Curve => b.chern.clone(),
            TableKind::Section { c_ref, .. } => c_ref + &b.chern + Q::from_integer(2.into()),
        }
    }

    pub fn map(&self, arity: usize) -> &BTreeMap<Key, Q> {
        match arity {
            2 => &self.two_point,
            3 => &self.three_point,
            4 => &self.four_point_chi,
            _ => panic!("arity {arity} not stored"),
        }
    }

    fn map_mut(&mut self, arity: usize) -> &mut BTreeMap<Key, Q> {
        match arity {
            2 => &mut self.two_point,
            3 => &mut self.three_point,
            4 => &mut self.four_point_chi,
            _ => panic!("arity {arity} not stored"),
        }
    }

    pub fn bound(&self, arity: usize) -> &Option<Bound> {
        self.complete.get(arity)
    }

    pub fn covers(&self, arity: usize, energy: &Q) -> bool {
        self.bound(arity).as_ref().is_some_and(|b| b.covers(energy))
    }

    pub fn require(&self, arity: usize, energy: &Q) -> Result<()> {
        if self.covers(arity, energy) {
            Ok(())
        } else {
            Err(self.incomplete(arity, energy))
        }
    }

    pub fn incomplete(&self, arity: usize, energy: &Q) -> QhError {
        QhError::TableIncomplete {
            table: format!("{}{}-point", if self.is_section() { "section " } else { "" }, arity),
            need: energy.clone(),
            have: bound_text(self.bound(arity)),
        }
    }

    /// Stores a value given in argument order `idx`; conflicting duplicates are an error.
    pub fn insert(&mut self, m: &ManifoldModel, idx: &[usize], b: Exp, value: Q) -> Result<()> {
        let (key, sign, forced_zero) = canonical(m, idx);
        if forced_zero {
            if value.is_zero() {
                return Ok(());
            }
            return Err(QhError::Malformed(format!("entry {idx:?} repeats an odd class but is nonzero")));
        }
        let v = value * sign;
        let arity = idx.len();
        let slot = self.map_mut(arity);
        match slot.get(&(key.clone(), b.clone())) {
            Some(old) if *old != v => Err(QhError::Malformed(format!("conflicting values for entry {idx:?}"))),
            _ => {
                if v.is_zero() {
                    slot.remove(&(key, b));
                } else {
                    slot.insert((key, b), v);
                }
                Ok(())
            }
        }
    }

    /// Overwrites a stored canonical entry (used by mutation tests).
    pub fn set_raw(&mut self, arity: usize, key: Key, value: Q) {
        if value.is_zero() {
            self.map_mut(arity).remove(&key);
        } else {
            self.map_mut(arity).insert(key, value);
        }
    }

    /// The stored value, in argument order, if any.
    pub fn stored(&self, m: &ManifoldModel, idx: &[usize], b: &Exp) -> Option<Q> {
        let (key, sign, forced_zero) = canonical(m, idx);
        if forced_zero {
            return Some(Q::zero());
        }
        self.map(idx.len()).get(&(key, b.clone())).map(|v| v * sign)
    }

    /// Value in argument order, using the classical and completeness rules for absent entries.
    pub fn lookup(&self, m: &ManifoldModel, idx: &[usize], b: &Exp) -> Result<Q> {
        if let Some(v) = self.stored(m, idx, b) {
            return Ok(v);
        }
        let arity = idx.len();
        if matches!(self.kind, TableKind::Curve) {
            if b.is_zero() {
                return classical(m, idx);
            }
            if b.omega <= Q::zero() {
                return Ok(Q::zero());
            }
        }
        let e = self.energy(b);
        if self.covers(arity, &e) {
            Ok(Q::zero())
        } else {
            Err(self.incomplete(arity, &e))
        }
    }

    pub fn n3(&self, m: &ManifoldModel, i: usize, j: usize, k: usize, b: &Exp) -> Result<Q> {
        self.lookup(m, &[i, j, k], b)
    }

    pub fn n2(&self, m: &ManifoldModel, i: usize, j: usize, b: &Exp) -> Result<Q> {
        self.lookup(m, &[i, j], b)
    }

    pub fn n4chi(&self, m: &ManifoldModel, idx: [usize; 4], b: &Exp) -> Result<Q> {
        self.lookup(m, &idx, b)
    }

    /// Free four-point invariants of a curve table, where the axioms determine
    /// them: zero with a fundamental-class argument or in the zero class, and
    /// the divisor rule otherwise. `None` when neither applies.
    pub fn n4_free(&self, m: &ManifoldModel, idx: [usize; 4], b: &Exp) -> Option<Result<Q>> {
        if b.is_zero() || idx.contains(&m.top) || b.omega <= Q::zero() {
            return Some(Ok(Q::zero()));
        }
        for p in 0..4 {
            if m.degree(idx[p]) + 2 == 2 * m.n {
                let db = m.divisor_degree(idx[p], b)?;
                let rest: Vec<usize> = (0..4).filter(|&q| q != p).map(|q| idx[q]).collect();
                // a divisor has even degree, so moving it costs no sign
                return Some(self.n3(m, rest[0], rest[1], rest[2], b).map(|v| v * db));
            }
        }
        None
    }

    /// All classes appearing in the table at the given arity.
    pub fn classes(&self, arity: usize) -> BTreeSet<Exp> {
        self.map(arity).keys().map(|(_, b)| b.clone()).collect()
    }

    pub fn all_classes(&self) -> BTreeSet<Exp> {
        let mut s = self.classes(2);
        s.extend(self.classes(3));
        s.extend(self.classes(4));
        s
    }

    /// Classes whose entries may be nonzero at energy `≤ level`, including zero
    /// for curve tables. Errors when the table does not reach `level`.
    pub fn classes_upto(&self, arity: usize, level: &Q) -> Result<Vec<Exp>> {
        self.require(arity, level)?;
        let mut out: Vec<Exp> = Vec::new();
        if matches!(self.kind, TableKind::Curve) {
            out.push(Exp::zero());
        }
        for b in self.classes(arity) {
            if &self.energy(&b) <= level && !out.contains(&b) {
                out.push(b);
            }
        }
        Ok(out)
    }

    pub fn entry_count(&self) -> usize {
        self.three_point.len() + self.two_point.len() + self.four_point_chi.len()
    }

    /// Every stored entry as `(arity, key, value)` in a fixed order.
    pub fn entries(&self) -> Vec<(usize, Key, Q)> {
        let mut out = Vec::new();
        for arity in [3, 2, 4] {
            for (k, v) in self.map(arity) {
                out.push((arity, k.clone(), v.clone()));
            }
        }
        out
    }
}

/// Zero-class values: constant maps see only the intersection ring.
fn classical(m: &ManifoldModel, idx: &[usize]) -> Result<Q> {
    match idx.len() {
        2 => Ok(Q::zero()),
        3 => m.classical3(idx[0], idx[1], idx[2]),
        4 => {
            let ab = m.cap_basis(idx[0], idx[1])?.to_vec();
            let abc = m.cap(&ab, &m.unit(idx[2]))?;
            Ok(m.intersect(&abc, &m.unit(idx[3])))
        }
        _ => Ok(Q::zero()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rational::qi;

    #[test]
    fn lookup_rules() {
        let m = catalog::ruled_fiber(&qi(1));
        let t = catalog::ruled_fiber_gw(&m);
        let f = m.h2.generator(0);
        let (tm, pt) = (m.index("T-").unwrap(), m.point);
        assert_eq!(t.n3(&m, tm, tm, pt, &f).unwrap(), qi(1));
        assert_eq!(t.n3(&m, pt, tm, tm, &f).unwrap(), qi(1));
        assert_eq!(t.n3(&m, tm, tm, pt, &Exp::zero()).unwrap(), qi(0));
        assert_eq!(t.n3(&m, 0, tm, tm, &Exp::zero()).unwrap(), qi(-1));
        assert_eq!(t.n3(&m, tm, tm, pt, &f.scale(&qi(2))).unwrap(), qi(0));
        assert_eq!(t.n3(&m, tm, tm, pt, &f.scale(&qi(-1))).unwrap(), qi(0));
    }

    #[test]
    fn incomplete_lookup_errors() {
        let m = catalog::ruled_fiber(&qi(1));
        let mut t = catalog::ruled_fiber_gw(&m);
        t.complete = Completeness::uniform(Bound::Finite(qi(3)));
        let f = m.h2.generator(0);
        assert!(t.n3(&m, 1, 1, 1, &f).is_ok());
        assert!(t.n3(&m, 1, 1, 1, &f.scale(&qi(2))).unwrap_err().is_incomplete());
    }

    #[test]
    fn odd_classes_anticommute() {
        let m = catalog::torus();
        let a = m.index("a").unwrap();
        let b = m.index("b").unwrap();
        let mut t = GWTable::curve(Completeness::uniform(Bound::Infinite));
        let cls = m.h2.generator(0);
        t.insert(&m, &[a, b, m.point], cls.clone(), qi(3)).unwrap();
        assert_eq!(t.n3(&m, b, a, m.point, &cls).unwrap(), qi(-3));
        assert_eq!(t.n3(&m, a, a, m.point, &cls).unwrap(), qi(0));
        assert!(t.insert(&m, &[b, a, m.point], cls, qi(3)).is_err());
    }
}
