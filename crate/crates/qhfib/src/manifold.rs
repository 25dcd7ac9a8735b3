//! Homological model of a closed symplectic manifold and quantum homology classes over it.

use crate::error::{QhError, Result};
use crate::linalg::{self, Mat};
use crate::novikov::{Exp, H2Lattice, NovikovElement};
use crate::rational::{fmt_coeff_prefix, Q};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisElement {
    pub label: String,
    pub degree: u32,
}

/// `(−1)^{|a||b|}` as a rational.
pub fn koszul(da: u32, db: u32) -> Q {
    if (da * db) % 2 == 1 {
        -Q::one()
    } else {
        Q::one()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldModel {
    pub name: String,
    /// Half the real dimension.
    pub n: u32,
    pub basis: Vec<BasisElement>,
    pub pairing: Mat,
    /// `triple[i][j]` holds the coordinates of `e_i ∩ e_j`.
    pub triple: Option<Vec<Vec<Vec<Q>>>>,
    pub h2: H2Lattice,
    pub min_chern: u64,
    pub top: usize,
    pub point: usize,
    /// Basis element carrying each H₂ generator, when known.
    pub realized_by: Option<Vec<usize>>,
    pairing_inv: Mat,
}

impl ManifoldModel {
    pub fn new(
        name: impl Into<String>,
        n: u32,
        basis: Vec<BasisElement>,
        pairing: Mat,
        triple: Option<Vec<Vec<Vec<Q>>>>,
        h2: H2Lattice,
        min_chern: u64,
    ) -> Result<Self> {
        let m = basis.len();
        if pairing.len() != m || pairing.iter().any(|r| r.len() != m) {
            return Err(QhError::Malformed(format!("pairing must be {m}×{m}")));
        }
        if let Some(t) = &triple {
            if t.len() != m || t.iter().any(|r| r.len() != m || r.iter().any(|v| v.len() != m)) {
                return Err(QhError::Malformed(format!("triple tensor must be {m}×{m}×{m}")));
            }
        }
        for b in &basis {
            if b.degree > 2 * n {
                return Err(QhError::Malformed(format!("{} has degree {} > {}", b.label, b.degree, 2 * n)));
            }
        }
        let top = basis
            .iter()
            .position(|b| b.degree == 2 * n)
            .ok_or_else(|| QhError::Malformed("no fundamental class in the basis".into()))?;
        let point = basis
            .iter()
            .position(|b| b.degree == 0)
            .ok_or_else(|| QhError::Malformed("no point class in the basis".into()))?;
        let pairing_inv = linalg::inverse(&pairing).ok_or(QhError::DegeneratePairing)?;
        let realized_by = h2.generators.iter().map(|g| basis.iter().position(|b| &b.label == g)).collect();
        Ok(ManifoldModel { name: name.into(), n, basis, pairing, triple, h2, min_chern, top, point, realized_by, pairing_inv })
    }

    /// Declares which degree-2 basis element carries each H₂ generator.
    pub fn with_realization(mut self, labels: &[String]) -> Result<Self> {
        if labels.len() != self.h2.rank() {
            return Err(QhError::Malformed(format!(
                "{} realizing classes for {} generators",
                labels.len(),
                self.h2.rank()
            )));
        }
        let idx = labels.iter().map(|l| self.index(l)).collect::<Result<Vec<_>>>()?;
        for &i in &idx {
            if self.degree(i) != 2 {
                return Err(QhError::Malformed(format!("{} is not a degree-2 class", self.label(i))));
            }
        }
        self.realized_by = Some(idx);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.basis[i].degree
    }

    pub fn label(&self, i: usize) -> &str {
        &self.basis[i].label
    }

    pub fn index(&self, label: &str) -> Result<usize> {
        self.basis.iter().position(|b| b.label == label).ok_or_else(|| QhError::UnknownBasisLabel(label.into()))
    }

    pub fn unit(&self, i: usize) -> Vec<Q> {
        linalg::unit_vec(self.dim(), i)
    }

    pub fn fundamental(&self) -> Vec<Q> {
        self.unit(self.top)
    }

    /// `a ·_M b`.
    pub fn intersect(&self, a: &[Q], b: &[Q]) -> Q {
        linalg::dot(&linalg::vec_mat(a, &self.pairing), b)
    }

    /// Dual basis `{f_j}` with `e_i · f_j = δ_ij`; row `j` holds `f_j`.
    pub fn dual_basis(&self) -> Mat {
        linalg::transpose(&self.pairing_inv)
    }

    /// Rows `g_j` with `g_j · e_i = δ_ij`, so that `x = Σ_j (x · e_j) g_j`.
    pub fn left_dual_basis(&self) -> Mat {
        self.pairing_inv.clone()
    }

    /// The class `x` with `x · e_c = values[c]` for every basis element.
    pub fn solve_left(&self, values: &[Q]) -> Vec<Q> {
        linalg::vec_mat(values, &self.pairing_inv)
    }

    /// Poincaré dual of a cohomology covector given by its values on the basis.
    pub fn pd(&self, alpha: &[Q]) -> Vec<Q> {
        self.solve_left(alpha)
    }

    /// The covector `b ↦ x · b`.
    pub fn covector(&self, x: &[Q]) -> Vec<Q> {
        linalg::vec_mat(x, &self.pairing)
    }

    pub fn has_triple(&self) -> bool {
        self.triple.is_some()
    }

    pub fn cap_basis(&self, i: usize, j: usize) -> Result<&[Q]> {
        let t = self.triple.as_ref().ok_or(QhError::MissingTripleData)?;
        Ok(&t[i][j])
    }

    pub fn cap(&self, a: &[Q], b: &[Q]) -> Result<Vec<Q>> {
        let t = self.triple.as_ref().ok_or(QhError::MissingTripleData)?;
        let mut out = linalg::zero_vec(self.dim());
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if !bj.is_zero() {
                    linalg::add_scaled(&mut out, &(ai * bj), &t[i][j]);
                }
            }
        }
        Ok(out)
    }

    /// Classical three-point number `(e_i ∩ e_j) · e_k`.
    pub fn classical3(&self, i: usize, j: usize, k: usize) -> Result<Q> {
        let c = self.cap_basis(i, j)?;
        Ok(self.intersect(c, &self.unit(k)))
    }

    /// Degree of a homogeneous class, `None` for zero or mixed classes.
    pub fn homogeneous_degree(&self, v: &[Q]) -> Option<u32> {
        let mut d = None;
        for (i, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            match d {
                None => d = Some(self.degree(i)),
                Some(e) if e != self.degree(i) => return None,
                _ => {}
            }
        }
        d
    }

    /// Basis indices of degree `2n − 2`, the divisors.
    pub fn divisor_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degree(i) + 2 == 2 * self.n).collect()
    }

    /// Homology class of a curve given in generator coordinates.
    pub fn curve_class(&self, coords: &[Q]) -> Option<Vec<Q>> {
        let r = self.realized_by.as_ref()?;
        let mut v = linalg::zero_vec(self.dim());
        for (g, c) in coords.iter().enumerate() {
            v[r[g]] += c;
        }
        Some(v)
    }

    /// `D · B` for the canonical representative of `B`.
    pub fn divisor_degree(&self, d: usize, b: &Exp) -> Option<Q> {
        let coords = self.h2.rep(b)?;
        let c = self.curve_class(&coords)?;
        Some(self.intersect(&self.unit(d), &c))
    }
}

/// Element `Σ_E v_E ⊗ e^E` of `H_*(M) ⊗ Λ`; zero vectors are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QHClass {
    pub terms: BTreeMap<Exp, Vec<Q>>,
}

impl QHClass {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn classical(v: Vec<Q>) -> Self {
        Self::monomial(v, Exp::zero())
    }

    pub fn monomial(v: Vec<Q>, e: Exp) -> Self {
        let mut x = Self::zero();
        x.add_term(e, &v);
        x
    }

    pub fn basis(dim: usize, i: usize) -> Self {
        Self::classical(linalg::unit_vec(dim, i))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: Exp, v: &[Q]) {
        if linalg::is_zero_vec(v) {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(slot) => {
                for (a, b) in slot.iter_mut().zip(v) {
                    *a += b;
                }
                if linalg::is_zero_vec(slot) {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, v.to_vec());
            }
        }
    }

    pub fn add_scalar_term(&mut self, e: Exp, dim: usize, i: usize, c: Q) {
        if c.is_zero() {
            return;
        }
        let mut v = linalg::zero_vec(dim);
        v[i] = c;
        self.add_term(e, &v);
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (e, v) in &o.terms {
            r.add_term(e.clone(), v);
        }
        r
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        QHClass { terms: self.terms.iter().map(|(e, v)| (e.clone(), v.iter().map(|x| x * c).collect())).collect() }
    }

    /// Multiplication by `e^A`.
    pub fn shift(&self, a: &Exp) -> Self {
        QHClass { terms: self.terms.iter().map(|(e, v)| (e + a, v.clone())).collect() }
    }

    pub fn mul_nov(&self, x: &NovikovElement) -> Self {
        let mut r = Self::zero();
        for (e1, c) in &x.terms {
            for (e2, v) in &self.terms {
                let w: Vec<Q> = v.iter().map(|y| y * c).collect();
                r.add_term(e1 + e2, &w);
            }
        }
        r
    }

    /// Keeps the terms of energy at most `cutoff`.
    pub fn truncate(&self, cutoff: &Q) -> Self {
        QHClass {
            terms: self.terms.iter().filter(|(e, _)| &e.energy() <= cutoff).map(|(e, v)| (e.clone(), v.clone())).collect(),
        }
    }

    pub fn valuation(&self) -> Option<Q> {
        self.terms.keys().map(|e| e.energy()).min()
    }

    /// The Λ-coefficient on basis element `i`.
    pub fn component(&self, i: usize) -> NovikovElement {
        let mut x = NovikovElement::zero();
        for (e, v) in &self.terms {
            x.add_term(e.clone(), v[i].clone());
        }
        x
    }

    pub fn from_components(parts: &[NovikovElement]) -> Self {
        let dim = parts.len();
        let mut r = Self::zero();
        for (i, p) in parts.iter().enumerate() {
            for (e, c) in &p.terms {
                r.add_scalar_term(e.clone(), dim, i, c.clone());
            }
        }
        r
    }

    /// Applies a classical linear map termwise.
    pub fn map_linear(&self, f: impl Fn(&[Q]) -> Vec<Q>) -> Self {
        let mut r = Self::zero();
        for (e, v) in &self.terms {
            r.add_term(e.clone(), &f(v));
        }
        r
    }

    /// Degrees `dim(v_E) + 2c₁(E)` of the nonzero basis terms.
    pub fn degrees(&self, m: &ManifoldModel) -> Vec<Q> {
        let mut out = Vec::new();
        for (e, v) in &self.terms {
            for (i, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    let d = Q::from_integer(m.degree(i).into()) + e.degree();
                    if !out.contains(&d) {
                        out.push(d);
                    }
                }
            }
        }
        out
    }

    /// Terms in order of energy, then basis order, e.g. `-pt + 1@e^{-F}`.
    pub fn format(&self, m: &ManifoldModel) -> String {
        self.format_with(m, &m.h2)
    }

    /// As [`QHClass::format`], printing exponents against another lattice.
    pub fn format_with(&self, m: &ManifoldModel, lat: &H2Lattice) -> String {
        let mut items: Vec<(&Exp, usize, &Q)> = Vec::new();
        for (e, v) in &self.terms {
            for (i, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    items.push((e, i, x));
                }
            }
        }
        if items.is_empty() {
            return "0".into();
        }
        items.sort_by(|a, b| a.0.energy().cmp(&b.0.energy()).then(a.0.cmp(b.0)).then(a.1.cmp(&b.1)));
        let mut out = String::new();
        for (k, (e, i, c)) in items.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = if neg { -c } else { c.clone() };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let pre = fmt_coeff_prefix(&mag);
            if !pre.is_empty() {
                out.push_str(&pre);
                out.push('*');
            }
            out.push_str(m.label(i));
            if !e.is_zero() {
                out.push_str(&format!("@e^{{{}}}", lat.format_exp(e)));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;

    pub(crate) fn ruled_fiber() -> ManifoldModel {
        crate::catalog::ruled_fiber(&qi(1))
    }

    #[test]
    fn pairing_values() {
        let m = ruled_fiber();
        let t = m.unit(m.index("T-").unwrap());
        let f = m.unit(m.index("F").unwrap());
        assert_eq!(m.intersect(&m.fundamental(), &m.unit(m.point)), qi(1));
        assert_eq!(m.intersect(&t, &t), qi(-1));
        assert_eq!(m.intersect(&f, &f), qi(0));
    }

    #[test]
    fn dual_basis_of_ruled_fiber() {
        let m = ruled_fiber();
        let d = m.dual_basis();
        let v = |xs: [i64; 4]| xs.iter().map(|&x| qi(x)).collect::<Vec<_>>();
        assert_eq!(d, vec![v([0, 0, 0, 1]), v([0, 1, 1, 0]), v([0, 1, 0, 0]), v([1, 0, 0, 0])]);
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { qi(1) } else { qi(0) };
                assert_eq!(m.intersect(&m.unit(i), &d[j]), expect);
            }
        }
    }

    #[test]
    fn caps() {
        let m = ruled_fiber();
        let t = m.unit(2);
        let f = m.unit(1);
        assert_eq!(m.cap(&m.fundamental(), &t).unwrap(), t);
        assert_eq!(m.cap(&t, &f).unwrap(), m.unit(m.point));
        assert_eq!(m.cap(&t, &t).unwrap(), m.unit(m.point).iter().map(|x| -x).collect::<Vec<_>>());
    }

    #[test]
    fn pd_inverts_covector() {
        let m = ruled_fiber();
        assert!(linalg::is_zero_vec(&m.pd(&linalg::zero_vec(4))));
        for i in 0..4 {
            assert_eq!(m.pd(&m.covector(&m.unit(i))), m.unit(i));
        }
    }

    #[test]
    fn class_formatting() {
        let m = ruled_fiber();
        let mut x = QHClass::zero();
        x.add_scalar_term(Exp::zero(), 4, 3, qi(-1));
        x.add_scalar_term(m.h2.generator(0).scale(&qi(-1)), 4, 0, qi(1));
        assert_eq!(x.format(&m), "-pt + 1@e^{-F}");
        assert_eq!(QHClass::zero().format(&m), "0");
        let y = QHClass::monomial(m.unit(3), Exp::zero()).scale(&crate::rational::q(1, 2));
        assert_eq!(y.format(&m), "(1/2)*pt");
    }
}
