//! Second homology lattices and the Novikov ring over them.
//!
//! A class `B` is recorded by the pair `(ω(B), c₁(B))`; two classes with the
//! same pair are the same Novikov exponent. The lattice keeps a canonical
//! representative for printing, supported on the earliest independent
//! generators (spherical generators are tried first).
//!
//! The energy of a monomial `e^B` is `-ω(B)`. Truncation at a cutoff `κ`
//! keeps the monomials of energy at most `κ`.

use crate::linalg::{self, Mat};
use crate::rational::{fmt_coeff_prefix, Q};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NovikovError {
    #[error("not invertible: the lowest-energy part is not a single monomial")]
    NotInvertible,
    #[error("cutoff {0} is too small for a series inverse")]
    CutoffTooSmall(Q),
    #[error("lattice data malformed: {0}")]
    Malformed(String),
}

/// A class modulo `B ~ B'` iff `ω(B−B') = c₁(B−B') = 0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exp {
    pub omega: Q,
    pub chern: Q,
}

impl Exp {
    pub fn zero() -> Self {
        Exp { omega: Q::zero(), chern: Q::zero() }
    }

    pub fn new(omega: Q, chern: Q) -> Self {
        Exp { omega, chern }
    }

    pub fn is_zero(&self) -> bool {
        self.omega.is_zero() && self.chern.is_zero()
    }

    /// Energy of the monomial `e^B`.
    pub fn energy(&self) -> Q {
        -&self.omega
    }

    /// Grading of `e^B`.
    pub fn degree(&self) -> Q {
        &self.chern * Q::from_integer(2.into())
    }

    pub fn scale(&self, c: &Q) -> Exp {
        Exp { omega: &self.omega * c, chern: &self.chern * c }
    }
}

impl Add for &Exp {
    type Output = Exp;
    fn add(self, o: &Exp) -> Exp {
        Exp { omega: &self.omega + &o.omega, chern: &self.chern + &o.chern }
    }
}

impl Sub for &Exp {
    type Output = Exp;
    fn sub(self, o: &Exp) -> Exp {
        Exp { omega: &self.omega - &o.omega, chern: &self.chern - &o.chern }
    }
}

impl Neg for &Exp {
    type Output = Exp;
    fn neg(self) -> Exp {
        Exp { omega: -&self.omega, chern: -&self.chern }
    }
}

/// Rational second homology with the functionals ω and c₁.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LatticeDoc", into = "LatticeDoc")]
pub struct H2Lattice {
    pub generators: Vec<String>,
    pub omega: Vec<Q>,
    pub c1: Vec<Q>,
    pub spherical: Vec<bool>,
    pivots: Vec<usize>,
}

/// Serialized form of a lattice (all numbers as strings).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LatticeDoc {
    pub generators: Vec<String>,
    pub omega: Vec<String>,
    pub c1: Vec<String>,
    pub spherical: Vec<bool>,
}

impl TryFrom<LatticeDoc> for H2Lattice {
    type Error = NovikovError;
    fn try_from(d: LatticeDoc) -> Result<Self, Self::Error> {
        let p = |v: &[String]| -> Result<Vec<Q>, NovikovError> {
            v.iter()
                .map(|s| crate::rational::parse_q(s).map_err(|e| NovikovError::Malformed(e.to_string())))
                .collect()
        };
        H2Lattice::new(d.generators, p(&d.omega)?, p(&d.c1)?, d.spherical)
    }
}

impl From<H2Lattice> for LatticeDoc {
    fn from(l: H2Lattice) -> Self {
        LatticeDoc {
            generators: l.generators,
            omega: l.omega.iter().map(|x| x.to_string()).collect(),
            c1: l.c1.iter().map(|x| x.to_string()).collect(),
            spherical: l.spherical,
        }
    }
}

impl H2Lattice {
    pub fn new(
        generators: Vec<String>,
        omega: Vec<Q>,
        c1: Vec<Q>,
        spherical: Vec<bool>,
    ) -> Result<Self, NovikovError> {
        let g = generators.len();
        if omega.len() != g || c1.len() != g || spherical.len() != g {
            return Err(NovikovError::Malformed(format!(
                "{} generators but {} ω values, {} c₁ values, {} spherical flags",
                g,
                omega.len(),
                c1.len(),
                spherical.len()
            )));
        }
        let order: Vec<usize> =
            (0..g).filter(|&i| spherical[i]).chain((0..g).filter(|&i| !spherical[i])).collect();
        let m: Mat = vec![
            order.iter().map(|&i| omega[i].clone()).collect(),
            order.iter().map(|&i| c1[i].clone()).collect(),
        ];
        let pivots = linalg::rref(&m).1.into_iter().map(|p| order[p]).collect();
        Ok(H2Lattice { generators, omega, c1, spherical, pivots })
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    pub fn key(&self, coords: &[Q]) -> Exp {
        Exp { omega: linalg::dot(&self.omega, coords), chern: linalg::dot(&self.c1, coords) }
    }

    pub fn generator(&self, i: usize) -> Exp {
        Exp { omega: self.omega[i].clone(), chern: self.c1[i].clone() }
    }

    pub fn spherical_indices(&self) -> Vec<usize> {
        (0..self.rank()).filter(|&i| self.spherical[i]).collect()
    }

    /// Canonical coordinates of a class, or `None` if the pair `(ω, c₁)` is
    /// not attained by any rational class.
    pub fn rep(&self, e: &Exp) -> Option<Vec<Q>> {
        let m: Mat = vec![
            self.pivots.iter().map(|&i| self.omega[i].clone()).collect(),
            self.pivots.iter().map(|&i| self.c1[i].clone()).collect(),
        ];
        let sol = linalg::solve_min_support(&m, &[e.omega.clone(), e.chern.clone()])?;
        let mut out = linalg::zero_vec(self.rank());
        for (k, &i) in self.pivots.iter().enumerate() {
            out[i] = sol[k].clone();
        }
        Some(out)
    }

    /// Linear combination of generator names, e.g. `-F`, `(7/12)F`, `2F - T-`.
    pub fn format_coords(&self, coords: &[Q]) -> String {
        let mut out = String::new();
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let name = &self.generators[i];
            if out.is_empty() {
                out.push_str(&fmt_coeff_prefix(c));
            } else if c.is_negative() {
                out.push_str(" - ");
                out.push_str(&fmt_coeff_prefix(&-c));
            } else {
                out.push_str(" + ");
                out.push_str(&fmt_coeff_prefix(c));
            }
            out.push_str(name);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    pub fn format_exp(&self, e: &Exp) -> String {
        match self.rep(e) {
            Some(c) => self.format_coords(&c),
            None => format!("<ω={}, c₁={}>", e.omega, e.chern),
        }
    }
}

/// Finite formal sum `Σ λ_B e^B` with rational coefficients; zero terms are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NovikovElement {
    pub terms: BTreeMap<Exp, Q>,
}

impl NovikovElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Exp::zero(), Q::one())
    }

    pub fn scalar(c: Q) -> Self {
        Self::monomial(Exp::zero(), c)
    }

    pub fn monomial(e: Exp, c: Q) -> Self {
        let mut x = Self::zero();
        x.add_term(e, c);
        x
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Exp, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn coeff(&self, e: &Exp) -> Q {
        self.terms.get(e).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn neg(&self) -> Self {
        NovikovElement { terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        NovikovElement { terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }

    pub fn shift(&self, by: &Exp) -> Self {
        NovikovElement { terms: self.terms.iter().map(|(e, x)| (e + by, x.clone())).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut r = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                r.add_term(e1 + e2, c1 * c2);
            }
        }
        r
    }

    /// Drops every `e^B` of energy `-ω(B)` above `cutoff`.
    pub fn truncate(&self, cutoff: &Q) -> Self {
        NovikovElement {
            terms: self.terms.iter().filter(|(e, _)| &e.energy() <= cutoff).map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    /// Lowest energy among the terms.
    pub fn valuation(&self) -> Option<Q> {
        self.terms.keys().map(|e| e.energy()).min()
    }

    /// The terms of lowest energy.
    pub fn leading(&self) -> Self {
        match self.valuation() {
            None => Self::zero(),
            Some(v) => NovikovElement {
                terms: self.terms.iter().filter(|(e, _)| e.energy() == v).map(|(e, c)| (e.clone(), c.clone())).collect(),
            },
        }
    }

    /// Inverse by the geometric series on `x = λ e^{B₀} (1 + r)`.
    ///
    /// The result `y` is truncated at energy `cutoff − val(x)`, which is exactly
    /// what is needed for `x·y` to equal `1` after truncation at `cutoff`.
    pub fn invert(&self, cutoff: &Q) -> Result<Self, NovikovError> {
        let lead = self.leading();
        if lead.terms.len() != 1 {
            return Err(NovikovError::NotInvertible);
        }
        if cutoff.is_negative() {
            return Err(NovikovError::CutoffTooSmall(cutoff.clone()));
        }
        let (b0, lambda) = lead.terms.into_iter().next().unwrap();
        let lam_inv = Q::one() / &lambda;
        let unit = NovikovElement::monomial(-&b0, lam_inv.clone());
        // r = x / (λ e^{B₀}) − 1, every term of positive energy
        let r = self.mul(&unit).sub(&Self::one());
        let minus_r = r.neg();
        let mut acc = Self::one();
        let mut power = Self::one();
        loop {
            power = power.mul(&minus_r).truncate(cutoff);
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power);
        }
        Ok(acc.mul(&unit))
    }

    pub fn format(&self, lat: &H2Lattice) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| a.0.energy().cmp(&b.0.energy()).then(a.0.cmp(b.0)));
        let mut out = String::new();
        for (i, (e, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = if neg { -c } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if e.is_zero() {
                out.push_str(&mag.to_string());
            } else {
                out.push_str(&fmt_coeff_prefix(&mag));
                out.push_str(&format!("e^{{{}}}", lat.format_exp(e)));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn ruled() -> H2Lattice {
        H2Lattice::new(vec!["F".into(), "T-".into()], vec![qi(2), qi(1)], vec![qi(2), qi(-1)], vec![true, false]).unwrap()
    }

    fn f(l: &H2Lattice, k: i64) -> Exp {
        l.generator(0).scale(&qi(k))
    }

    #[test]
    fn addition_identities() {
        let l = ruled();
        let x = NovikovElement::monomial(f(&l, 1), qi(1));
        assert_eq!(x.add(&NovikovElement::zero()), x);
        assert!(x.add(&x.neg()).is_zero());
    }

    #[test]
    fn equivalent_classes_merge() {
        // (1, 0) and a different coordinate vector with the same (ω, c₁)
        let l = H2Lattice::new(vec!["A".into(), "B".into()], vec![qi(1), qi(2)], vec![qi(0), qi(0)], vec![true, true]).unwrap();
        let a = NovikovElement::monomial(l.key(&[qi(2), qi(0)]), qi(1));
        let b = NovikovElement::monomial(l.key(&[qi(0), qi(1)]), qi(1));
        assert_eq!(a.add(&b), NovikovElement::monomial(l.key(&[qi(2), qi(0)]), qi(2)));
    }

    #[test]
    fn group_ring_product() {
        let l = ruled();
        let one = NovikovElement::one();
        let t = NovikovElement::monomial(f(&l, -1), qi(1));
        let lhs = one.add(&t).mul(&one.sub(&t));
        let rhs = one.sub(&NovikovElement::monomial(f(&l, -2), qi(1)));
        assert_eq!(lhs, rhs);
        assert_eq!(f(&l, 1).degree(), qi(4));
    }

    #[test]
    fn geometric_series_inverse() {
        let l = ruled();
        let x = NovikovElement::one().sub(&NovikovElement::monomial(f(&l, -1), qi(1)));
        let y = x.invert(&qi(6)).unwrap();
        let mut expect = NovikovElement::zero();
        for k in 0..=3 {
            expect.add_term(f(&l, -k), qi(1));
        }
        assert_eq!(y, expect);
        assert_eq!(x.mul(&y).truncate(&qi(6)), NovikovElement::one());
    }

    #[test]
    fn monomial_and_scalar_inverse() {
        let l = ruled();
        let m = NovikovElement::monomial(f(&l, 3), qi(1));
        assert_eq!(m.invert(&qi(0)).unwrap(), NovikovElement::monomial(f(&l, -3), qi(1)));
        assert_eq!(NovikovElement::scalar(qi(2)).invert(&qi(1)).unwrap(), NovikovElement::scalar(q(1, 2)));
    }

    #[test]
    fn inverse_errors() {
        let l = H2Lattice::new(vec!["A".into(), "B".into()], vec![qi(1), qi(1)], vec![qi(0), qi(2)], vec![true, true]).unwrap();
        let tie = NovikovElement::monomial(l.generator(0), qi(1)).add(&NovikovElement::monomial(l.generator(1), qi(1)));
        assert_eq!(tie.invert(&qi(3)), Err(NovikovError::NotInvertible));
        assert_eq!(NovikovElement::zero().invert(&qi(3)), Err(NovikovError::NotInvertible));
        assert!(matches!(NovikovElement::one().invert(&qi(-1)), Err(NovikovError::CutoffTooSmall(_))));
    }

    #[test]
    fn truncation() {
        let l = ruled();
        let x = NovikovElement::one().add(&NovikovElement::monomial(f(&l, -1), qi(1)));
        assert_eq!(x.truncate(&qi(2)), x);
        assert_eq!(x.truncate(&qi(1)), NovikovElement::one());
        assert!(NovikovElement::zero().truncate(&qi(5)).is_zero());
    }

    #[test]
    fn canonical_representatives_print() {
        let l = ruled();
        assert_eq!(l.format_exp(&l.generator(0).scale(&q(7, 12))), "(7/12)F");
        assert_eq!(l.format_exp(&f(&l, -1)), "-F");
        assert_eq!(l.format_exp(&l.key(&[qi(1), qi(-1)])), "F - T-");
        let x = NovikovElement::one().add(&NovikovElement::monomial(f(&l, -1), qi(-2)));
        assert_eq!(x.format(&l), "1 - 2e^{-F}");
    }

    mod laws {
        use super::*;
        use proptest::prelude::*;

        fn element(lead: Option<(i64, i64)>) -> impl Strategy<Value = NovikovElement> {
            prop::collection::vec((-2i64..=2, -2i64..=2, -4i64..=4, 1i64..=3), 0..4).prop_map(move |ts| {
                let l = ruled();
                let mut x = NovikovElement::zero();
                for (a, b, p, d) in ts {
                    x.add_term(l.key(&[qi(a), qi(b)]), q(p, d));
                }
                if let Some((a, b)) = lead {
                    x.add_term(l.key(&[qi(a), qi(b)]), qi(1));
                }
                x
            })
        }

        proptest! {
            #[test]
            fn ring_axioms(x in element(None), y in element(None), z in element(None)) {
                prop_assert_eq!(x.mul(&y), y.mul(&x));
                prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
                prop_assert_eq!(x.add(&y).mul(&z), x.mul(&z).add(&y.mul(&z)));
                prop_assert_eq!(x.mul(&NovikovElement::one()), x.clone());
                prop_assert!(x.sub(&x).is_zero());
            }

            #[test]
            fn inverse_multiplies_to_one(
                tail in prop::collection::vec((0i64..=2, 0i64..=2, -4i64..=4, 1i64..=3), 0..4),
                lam in prop_oneof![-3i64..=-1, 1i64..=3],
                cut in 0i64..=8,
            ) {
                let l = ruled();
                let mut x = NovikovElement::monomial(l.key(&[qi(1), qi(0)]), qi(lam));
                for (a, b, p, d) in tail {
                    if a + b > 0 {
                        x.add_term(l.key(&[qi(1 - a), qi(-b)]), q(p, d));
                    }
                }
                let y = x.invert(&qi(cut)).unwrap();
                prop_assert_eq!(x.mul(&y).truncate(&qi(cut)), NovikovElement::one());
            }
        }
    }
}
