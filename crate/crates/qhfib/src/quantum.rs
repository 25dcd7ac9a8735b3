//! Small quantum homology of a closed manifold from its three-point table.

use crate::error::{QhError, Result};
use crate::gw::{Bound, GWTable};
use crate::linalg;
use crate::manifold::{koszul, ManifoldModel, QHClass};
use crate::novikov::{Exp, NovikovElement};
use crate::rational::Q;
use crate::report::Check;
use crate::series::{self, PNov, Solve};
use num_traits::{One, Signed, Zero};

/// Quantum ring `QH_*(M; Λ)` determined by a manifold and a curve table.
#[derive(Debug, Clone, Copy)]
pub struct QuantumRing<'a> {
    pub m: &'a ManifoldModel,
    pub gw: &'a GWTable,
}

/// Largest `ω(E)` over the exponents of a class.
pub fn max_omega(x: &QHClass) -> Q {
    x.terms.keys().map(|e| e.omega.clone()).max().unwrap_or_else(Q::zero)
}

impl<'a> QuantumRing<'a> {
    pub fn new(m: &'a ManifoldModel, gw: &'a GWTable) -> Self {
        QuantumRing { m, gw }
    }

    fn dim(&self) -> usize {
        self.m.dim()
    }

    /// Classes `B` with possibly nonzero `n(·,·,·; B)` and `ω(B) ≤ level`
    /// (`level = None`: all of them, which needs an infinite bound).
    fn classes(&self, level: Option<&Q>) -> Result<Vec<Exp>> {
        match level {
            Some(l) if !l.is_positive() => Ok(vec![Exp::zero()]),
            Some(l) => self.gw.classes_upto(3, l),
            None => match self.gw.bound(3) {
                Some(Bound::Infinite) => {
                    let mut v = vec![Exp::zero()];
                    v.extend(self.gw.classes(3).into_iter().filter(|b| !b.is_zero()));
                    Ok(v)
                }
                _ => Err(QhError::TableIncomplete {
                    table: "3-point".into(),
                    need: Q::zero(),
                    have: format!("{:?} (exact product needs an infinite bound)", self.gw.bound(3)),
                }),
            },
        }
    }

    /// `e_i * e_j` with every class of `ω(B) ≤ level` included.
    pub fn basis_product(&self, i: usize, j: usize, level: Option<&Q>) -> Result<QHClass> {
        let mut out = QHClass::zero();
        for b in self.classes(level)? {
            let vals = (0..self.dim()).map(|k| self.gw.n3(self.m, i, j, k, &b)).collect::<Result<Vec<_>>>()?;
            if linalg::is_zero_vec(&vals) {
                continue;
            }
            out.add_term(-&b, &self.m.solve_left(&vals));
        }
        Ok(out)
    }

    fn product_at(&self, a: &QHClass, b: &QHClass, level: Option<&Q>) -> Result<QHClass> {
        let d = self.dim();
        let mut table: Vec<Vec<Option<QHClass>>> = vec![vec![None; d]; d];
        let mut out = QHClass::zero();
        for (ea, va) in &a.terms {
            for (eb, vb) in &b.terms {
                let shifted = level.map(|l| l + &ea.omega + &eb.omega);
                for (i, x) in va.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in vb.iter().enumerate() {
                        if y.is_zero() {
                            continue;
                        }
                        let p = match (&table[i][j], level) {
                            (Some(p), None) => p.clone(),
                            _ => {
                                let p = self.basis_product(i, j, shifted.as_ref())?;
                                if level.is_none() {
                                    table[i][j] = Some(p.clone());
                                }
                                p
                            }
                        };
                        out = out.add(&p.shift(&(ea + eb)).scale(&(x * y)));
                    }
                }
            }
        }
        Ok(out)
    }

    /// `a * b` truncated at energy `cutoff`.
    pub fn product(&self, a: &QHClass, b: &QHClass, cutoff: &Q) -> Result<QHClass> {
        Ok(self.product_at(a, b, Some(cutoff))?.truncate(cutoff))
    }

    /// `a * b` with no truncation; needs a three-point table complete at every energy.
    pub fn product_exact(&self, a: &QHClass, b: &QHClass) -> Result<QHClass> {
        self.product_at(a, b, None)
    }

    /// Energy up to which `x * e_j` is known, `None` if exactly.
    fn column_precision(&self, x: &QHClass) -> Option<Q> {
        match self.gw.bound(3) {
            Some(Bound::Infinite) => None,
            Some(Bound::Finite(l)) => Some(l - max_omega(x)),
            None => Some(-max_omega(x)),
        }
    }

    /// Λ-matrix of `y ↦ x * y` at working precision `w`, with `(x * e_j)` in column `j`.
    pub fn multiplication_matrix(&self, x: &QHClass, w: &Q) -> Result<Vec<Vec<PNov>>> {
        let d = self.dim();
        let prec = self.column_precision(x);
        let mut cols = Vec::with_capacity(d);
        for j in 0..d {
            let ej = QHClass::basis(d, j);
            let col = match &prec {
                None => {
                    let p = self.product_exact(x, &ej)?;
                    (0..d).map(|i| PNov::exact(p.component(i))).collect::<Vec<_>>()
                }
                Some(k) => {
                    let k = k.clone().min(w.clone());
                    let p = self.product(x, &ej, &k)?;
                    (0..d).map(|i| PNov::known_to(p.component(i), k.clone())).collect()
                }
            };
            cols.push(col);
        }
        Ok((0..d).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect())
    }

    /// Inverse of `q` modulo energy `cutoff`: the returned `x` is truncated at
    /// `cutoff − val(q)`, so `q * x ≡ 1`. `Ok(None)` when `q` is not a unit.
    pub fn is_unit(&self, q: &QHClass, cutoff: &Q) -> Result<Option<QHClass>> {
        let Some(vq) = q.valuation() else {
            return Ok(None);
        };
        let target = cutoff - &vq;
        let d = self.dim();
        let rhs: Vec<Vec<PNov>> = (0..d)
            .map(|i| vec![if i == self.m.top { PNov::exact(NovikovElement::one()) } else { PNov::zero() }])
            .collect();
        let limit = self.column_precision(q);
        let step = Q::one() + target.abs() + vq.abs();
        let mut w = target.clone() + step.clone();
        for _ in 0..8 {
            let a = self.multiplication_matrix(q, &w)?;
            match series::solve(&a, &rhs, &w) {
                Solve::Singular => return Ok(None),
                Solve::Undecided => {}
                Solve::Solved(x) => {
                    let col: Vec<PNov> = x.into_iter().map(|mut r| r.remove(0)).collect();
                    let enough = series::min_prec(&col).is_none_or(|p| p >= target);
                    if enough {
                        let parts: Vec<NovikovElement> = col.iter().map(|c| c.value.truncate(&target)).collect();
                        let inv = QHClass::from_components(&parts);
                        self.confirm_inverse(q, &inv, cutoff)?;
                        return Ok(Some(inv));
                    }
                }
            }
            if let Some(l) = &limit {
                if l < &w {
                    return Err(QhError::TableIncomplete {
                        table: "3-point".into(),
                        need: w + max_omega(q),
                        have: format!("{:?}", self.gw.bound(3)),
                    });
                }
            }
            w = w + step.clone();
        }
        Ok(None)
    }

    fn confirm_inverse(&self, q: &QHClass, x: &QHClass, cutoff: &Q) -> Result<()> {
        let prod = self.product(q, x, cutoff)?;
        if prod == QHClass::basis(self.dim(), self.m.top) {
            Ok(())
        } else {
            Err(QhError::Inconsistent(format!("inverse check gave {}", prod.format(self.m))))
        }
    }

    /// Associativity of the product on all basis triples, modulo `cutoff`.
    pub fn associativity_checks(&self, cutoff: &Q) -> Vec<Check> {
        let d = self.dim();
        let mut out = Vec::new();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let inst = format!("({},{},{})", self.m.label(i), self.m.label(j), self.m.label(k));
                    let (ei, ej, ek) = (QHClass::basis(d, i), QHClass::basis(d, j), QHClass::basis(d, k));
                    let r = (|| -> Result<(QHClass, QHClass)> {
                        let l = self.product(&self.product(&ei, &ej, cutoff)?, &ek, cutoff)?;
                        let r = self.product(&ei, &self.product(&ej, &ek, cutoff)?, cutoff)?;
                        Ok((l, r))
                    })();
                    out.push(match r {
                        Ok((l, r)) => Check::compare("associativity", inst, l.format(self.m), r.format(self.m)),
                        Err(e) => Check::skipped("associativity", inst, e.to_string()),
                    });
                }
            }
        }
        out
    }

    /// Splitting of every stored fixed-cross-ratio entry into pairs of three-point invariants.
    pub fn chi_decomposition_checks(&self) -> Vec<Check> {
        let m = self.m;
        let dual = m.left_dual_basis();
        let mut out = Vec::new();
        for ((idx, a), v) in &self.gw.four_point_chi {
            let inst = format!("({};{})", labels(m, idx), m.h2.format_exp(a));
            match chi_split(self.gw, m, &dual, [idx[0], idx[1], idx[2], idx[3]], a) {
                Ok(rhs) => out.push(Check::compare("chi splitting", inst, v, rhs)),
                Err(e) => out.push(Check::skipped("chi splitting", inst, e.to_string())),
            }
        }
        out
    }

    /// Graded commutativity on all basis pairs.
    pub fn commutativity_checks(&self, cutoff: &Q) -> Vec<Check> {
        let d = self.dim();
        let mut out = Vec::new();
        for i in 0..d {
            for j in i..d {
                let inst = format!("({},{})", self.m.label(i), self.m.label(j));
                let s = koszul(self.m.degree(i), self.m.degree(j));
                let r = (|| -> Result<(QHClass, QHClass)> {
                    let ab = self.product(&QHClass::basis(d, i), &QHClass::basis(d, j), cutoff)?;
                    let ba = self.product(&QHClass::basis(d, j), &QHClass::basis(d, i), cutoff)?;
                    Ok((ab, ba.scale(&s)))
                })();
                out.push(match r {
                    Ok((l, r)) => Check::compare("graded commutativity", inst, l.format(self.m), r.format(self.m)),
                    Err(e) => Check::skipped("graded commutativity", inst, e.to_string()),
                });
            }
        }
        out
    }

    /// `[M] * a = a` on the basis.
    pub fn unit_checks(&self, cutoff: &Q) -> Vec<Check> {
        let d = self.dim();
        (0..d)
            .map(|i| {
                let inst = self.m.label(i).to_string();
                match self.product(&QHClass::basis(d, self.m.top), &QHClass::basis(d, i), cutoff) {
                    Ok(p) => Check::compare("unit law", inst, p.format(self.m), QHClass::basis(d, i).format(self.m)),
                    Err(e) => Check::skipped("unit law", inst, e.to_string()),
                }
            })
            .collect()
    }
}

pub fn labels(m: &ManifoldModel, idx: &[usize]) -> String {
    idx.iter().map(|&i| m.label(i)).collect::<Vec<_>>().join(",")
}

/// `Σ_{A₁+A₂=A} Σ_α n(v₁,v₂,e_α;A₁) n(g_α,v₃,v₄;A₂)` over a curve table, where
/// `dual` holds the rows `g_α` with `g_α · e_β = δ_αβ`.
pub fn chi_split(gw: &GWTable, m: &ManifoldModel, dual: &linalg::Mat, v: [usize; 4], a: &Exp) -> Result<Q> {
    let mut firsts = vec![Exp::zero()];
    firsts.extend(gw.classes(3).into_iter().filter(|b| !b.is_zero()));
    let mut total = Q::zero();
    for a1 in firsts {
        let a2 = a - &a1;
        if !a2.is_zero() && a2.omega <= Q::zero() {
            continue;
        }
        if !a1.is_zero() && a1.omega <= Q::zero() {
            continue;
        }
        for (alpha, f) in dual.iter().enumerate() {
            let left = gw.n3(m, v[0], v[1], alpha, &a1)?;
            if left.is_zero() {
                continue;
            }
            let mut right = Q::zero();
            for (beta, c) in f.iter().enumerate() {
                if !c.is_zero() {
                    right += c * gw.n3(m, beta, v[2], v[3], &a2)?;
                }
            }
            total += left * right;
        }
    }
    // the enumeration above only sees stored first factors, so the second
    // factor's completeness at A must also hold for absent ones
    gw.require(3, &gw.energy(a))?;
    Ok(total)
}

/// `QH⁺` closure hypothesis: no stored entry has `c₁(B) > 0`.
pub fn qh_plus_closure_check(gw: &GWTable) -> bool {
    gw.entries().iter().all(|(_, (_, b), v)| v.is_zero() || !b.chern.is_positive())
}

/// Membership in `⊕_{k<n} H_{2k} ⊗ Λ`.
pub fn in_qh_plus(m: &ManifoldModel, x: &QHClass) -> bool {
    x.terms.values().all(|v| v.iter().enumerate().all(|(i, c)| c.is_zero() || (m.degree(i) % 2 == 0 && m.degree(i) < 2 * m.n)))
}
