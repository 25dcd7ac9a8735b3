//! Linear algebra over the Novikov ring with tracked precision.
//!
//! A [`PNov`] is a Novikov element known modulo terms of energy above
//! `prec`; `prec = None` means the value is exact. Gauss–Jordan elimination
//! picks, in each column, an entry whose lowest-energy part is a single
//! monomial, of minimal energy.

use crate::novikov::NovikovElement;
use crate::rational::Q;

#[derive(Debug, Clone, PartialEq)]
pub struct PNov {
    pub value: NovikovElement,
    pub prec: Option<Q>,
}

fn min_opt(a: &Option<Q>, b: &Option<Q>) -> Option<Q> {
    match (a, b) {
        (None, None) => None,
        (Some(x), None) | (None, Some(x)) => Some(x.clone()),
        (Some(x), Some(y)) => Some(x.min(y).clone()),
    }
}

impl PNov {
    pub fn exact(value: NovikovElement) -> Self {
        PNov { value, prec: None }
    }

    pub fn known_to(value: NovikovElement, prec: Q) -> Self {
        PNov { value: value.truncate(&prec), prec: Some(prec) }
    }

    pub fn zero() -> Self {
        Self::exact(NovikovElement::zero())
    }

    pub fn is_exact_zero(&self) -> bool {
        self.prec.is_none() && self.value.is_zero()
    }

    /// Lower bound for the true valuation; `None` for an exact zero.
    fn val_bound(&self) -> Option<Q> {
        self.value.valuation().or_else(|| self.prec.clone())
    }

    fn normalize(value: NovikovElement, prec: Option<Q>) -> Self {
        match prec {
            Some(p) => Self::known_to(value, p),
            None => Self::exact(value),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::normalize(self.value.add(&o.value), min_opt(&self.prec, &o.prec))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::normalize(self.value.sub(&o.value), min_opt(&self.prec, &o.prec))
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_exact_zero() || o.is_exact_zero() {
            return Self::zero();
        }
        let v1 = self.val_bound().expect("nonzero");
        let v2 = o.val_bound().expect("nonzero");
        let p1 = self.prec.as_ref().map(|p| p + &v2);
        let p2 = o.prec.as_ref().map(|p| p + &v1);
        Self::normalize(self.value.mul(&o.value), min_opt(&p1, &p2))
    }

    /// Leading part is a known single monomial.
    pub fn is_pivot(&self) -> bool {
        !self.value.is_zero() && self.value.leading().terms.len() == 1
    }

    /// Inverse of a pivot. Exact monomials invert exactly; everything else is
    /// expanded to absolute precision `working` at most.
    pub fn inverse(&self, working: &Q) -> Option<Self> {
        if !self.is_pivot() {
            return None;
        }
        let v0 = self.value.valuation()?;
        if self.prec.is_none() && self.value.terms.len() == 1 {
            return Some(Self::exact(self.value.invert(&Q::from_integer(0.into())).ok()?));
        }
        let mut p = self.prec.clone().map_or(working.clone(), |p| p.min(working.clone()));
        if p < v0 {
            p = v0.clone();
        }
        let y = self.value.invert(&(&p - &v0)).ok()?;
        let prec = &p - &v0 - &v0;
        Some(Self::known_to(y, prec))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Solve {
    Solved(Vec<Vec<PNov>>),
    /// Some column has no usable pivot although its entries are exactly known.
    Singular,
    /// Precision ran out before a pivot could be certified.
    Undecided,
}

/// Solves `A X = B` for square `A`; `B` has one column per right-hand side.
pub fn solve(a: &[Vec<PNov>], b: &[Vec<PNov>], working: &Q) -> Solve {
    let n = a.len();
    let r = b.first().map_or(0, |row| row.len());
    let mut rows: Vec<Vec<PNov>> = (0..n).map(|i| a[i].iter().chain(b[i].iter()).cloned().collect()).collect();
    for col in 0..n {
        let mut best: Option<(usize, Q)> = None;
        let mut all_exact_zero = true;
        for (i, row) in rows.iter().enumerate().skip(col) {
            let e = &row[col];
            if !e.is_exact_zero() {
                all_exact_zero = false;
            }
            if e.is_pivot() {
                let v = e.value.valuation().unwrap();
                if best.as_ref().is_none_or(|(_, bv)| v < *bv) {
                    best = Some((i, v));
                }
            }
        }
        let Some((p, _)) = best else {
            let exact = rows.iter().skip(col).all(|row| row[col].prec.is_none());
            return if all_exact_zero || exact { Solve::Singular } else { Solve::Undecided };
        };
        rows.swap(col, p);
        let Some(inv) = rows[col][col].inverse(working) else {
            return Solve::Undecided;
        };
        let pivot_row: Vec<PNov> = rows[col].iter().map(|x| x.mul(&inv)).collect();
        rows[col] = pivot_row.clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == col || row[col].is_exact_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = x.sub(&f.mul(y));
            }
        }
    }
    Solve::Solved(rows.into_iter().map(|row| row[n..n + r].to_vec()).collect())
}

/// Lowest precision among the entries (`None` when all are exact).
pub fn min_prec(xs: &[PNov]) -> Option<Q> {
    xs.iter().fold(None, |acc, x| min_opt(&acc, &x.prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::novikov::Exp;
    use crate::rational::qi;

    fn t(k: i64) -> Exp {
        Exp::new(qi(k), qi(0))
    }

    fn mono(k: i64, c: i64) -> NovikovElement {
        NovikovElement::monomial(t(k), qi(c))
    }

    #[test]
    fn precision_of_products() {
        let x = PNov::known_to(mono(0, 1).add(&mono(-1, 1)), qi(3));
        let y = PNov::exact(mono(-2, 1));
        let z = x.mul(&y);
        assert_eq!(z.prec, Some(qi(5)));
        assert_eq!(z.value, mono(-2, 1).add(&mono(-3, 1)));
    }

    #[test]
    fn inverse_precision() {
        let x = PNov::exact(mono(0, 1).sub(&mono(-1, 1)));
        let y = x.inverse(&qi(4)).unwrap();
        assert_eq!(y.prec, Some(qi(4)));
        assert_eq!(x.mul(&y).value.truncate(&qi(4)), NovikovElement::one());
    }

    #[test]
    fn two_by_two_monomial_system() {
        // [[0, e^{-1}], [e^{1}, 0]] x = (1, 0)
        let a = vec![
            vec![PNov::zero(), PNov::exact(mono(-1, 1))],
            vec![PNov::exact(mono(1, 1)), PNov::zero()],
        ];
        let b = vec![vec![PNov::exact(NovikovElement::one())], vec![PNov::zero()]];
        match solve(&a, &b, &qi(10)) {
            Solve::Solved(x) => {
                assert_eq!(x[0][0], PNov::zero());
                assert_eq!(x[1][0], PNov::exact(mono(1, 1)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn singular_detected() {
        let one = PNov::exact(NovikovElement::one());
        let a = vec![vec![one.clone(), one.clone()], vec![one.clone(), one.clone()]];
        let b = vec![vec![one.clone()], vec![PNov::zero()]];
        assert_eq!(solve(&a, &b, &qi(5)), Solve::Singular);
    }
}
