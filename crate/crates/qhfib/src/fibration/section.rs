//! The operation `Ψ_{φ,σ}` and everything computed from two-point section
//! invariants alone: `σ_φ`, `ρ(φ)`, composition and inverses.

use crate::error::{QhError, Result};
use crate::gw::{Bound, Completeness, GWTable, TableKind};
use crate::linalg;
use crate::manifold::{ManifoldModel, QHClass};
use crate::novikov::{Exp, NovikovElement};
use crate::quantum::{in_qh_plus, max_omega, QuantumRing};
use crate::rational::Q;
use crate::report::Check;
use crate::series::{self, PNov, Solve};
use num_traits::{One, Signed, Zero};

use super::{chern_residue, ChernResidue};

/// Two-point section invariants `n(a,b; σ_ref + K)` indexed by fiber classes.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionData {
    /// Name of the reference section.
    pub label: String,
    pub fiber: ManifoldModel,
    pub fiber_gw: GWTable,
    pub table: GWTable,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RhoShape {
    /// `μ [M] ⊗ e^{−A}`.
    MonomialScalar { mu: Q, a: Exp },
    /// `μ [M] ⊗ e^{−A} + x` with `x ∈ QH⁺`.
    ScalarPlusQhPlus { mu: Q, a: Exp },
    Other,
}

impl RhoShape {
    pub fn of(m: &ManifoldModel, q: &QHClass) -> Self {
        let top = q.component(m.top);
        if top.terms.len() != 1 {
            return RhoShape::Other;
        }
        let (e, mu) = top.terms.iter().next().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let rest = q.sub(&QHClass::monomial(m.unit(m.top), e.clone()).scale(&mu));
        let a = -&e;
        if rest.is_zero() {
            RhoShape::MonomialScalar { mu, a }
        } else if in_qh_plus(m, &rest) {
            RhoShape::ScalarPlusQhPlus { mu, a }
        } else {
            RhoShape::Other
        }
    }

    pub fn describe(&self, m: &ManifoldModel) -> String {
        match self {
            RhoShape::MonomialScalar { mu, a } => format!("monomial-scalar (mu = {mu}, A = {})", m.h2.format_exp(a)),
            RhoShape::ScalarPlusQhPlus { mu, a } => format!("scalar-plus-QH+ (mu = {mu}, A = {})", m.h2.format_exp(a)),
            RhoShape::Other => "other".into(),
        }
    }
}

impl SectionData {
    pub fn u_ref(&self) -> Q {
        match &self.table.kind {
            TableKind::Section { u_ref, .. } => u_ref.clone(),
            TableKind::Curve => Q::zero(),
        }
    }

    pub fn c_ref(&self) -> Q {
        match &self.table.kind {
            TableKind::Section { c_ref, .. } => c_ref.clone(),
            TableKind::Curve => Q::zero(),
        }
    }

    pub fn fiber_ring(&self) -> QuantumRing<'_> {
        QuantumRing::new(&self.fiber, &self.fiber_gw)
    }

    /// `σ_ref + ι(B)` as text.
    pub fn format_section(&self, offset: &Exp) -> String {
        if offset.is_zero() {
            return self.label.clone();
        }
        let b = self.fiber.h2.format_exp(offset);
        match b.strip_prefix('-') {
            Some(rest) => format!("{} - {rest}", self.label),
            None => format!("{} + {b}", self.label),
        }
    }

    /// `Ψ_{σ}(e_i)` for `σ = σ_ref + ι(C)`, keeping section classes of energy at most `level`.
    fn psi_basis(&self, offset: &Exp, i: usize, level: &Q) -> Result<QHClass> {
        let d = self.fiber.dim();
        let mut out = QHClass::zero();
        for k in self.table.classes(2) {
            if &self.table.energy(&k) > level {
                continue;
            }
            let vals = (0..d).map(|b| self.table.n2(&self.fiber, i, b, &k)).collect::<Result<Vec<_>>>()?;
            out.add_term(offset - &k, &self.fiber.solve_left(&vals));
        }
        Ok(out)
    }

    /// `Ψ_{φ,σ}(a)` modulo energy above `cutoff`, where `σ = σ_ref + ι(offset)`.
    pub fn psi(&self, offset: &Exp, a: &QHClass, cutoff: &Q) -> Result<QHClass> {
        let level = self.u_ref() + &offset.omega + cutoff + max_omega(a);
        self.table.require(2, &level)?;
        let mut out = QHClass::zero();
        for (e, v) in &a.terms {
            for (i, c) in v.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                out = out.add(&self.psi_basis(offset, i, &level)?.shift(e).scale(c));
            }
        }
        Ok(out.truncate(cutoff))
    }

    /// `Q_σ = Ψ_{φ,σ}([M])`.
    pub fn q_sigma(&self, offset: &Exp, cutoff: &Q) -> Result<QHClass> {
        self.psi(offset, &QHClass::basis(self.fiber.dim(), self.fiber.top), cutoff)
    }

    /// How far below the input energy `Ψ_σ` can push a term.
    pub fn psi_margin(&self, offset: &Exp) -> Q {
        let lowest = self.table.classes(2).iter().map(|k| &k.omega - &offset.omega).min().unwrap_or_else(Q::zero);
        if lowest.is_negative() {
            -lowest
        } else {
            Q::zero()
        }
    }

    /// Offset `B` of the normalized section `σ_φ = σ_ref + ι(B)`.
    pub fn sigma_phi(&self) -> Result<Exp> {
        let lat = &self.fiber.h2;
        let sph = lat.spherical_indices();
        let w: Vec<Q> = sph.iter().map(|&g| lat.omega[g].clone()).collect();
        let c: Vec<Q> = sph.iter().map(|&g| lat.c1[g].clone()).collect();
        let (u, cr) = (self.u_ref(), self.c_ref());
        let both = vec![w.clone(), c.clone()];
        let x = if linalg::rank(&both) == 2 {
            linalg::solve_min_support(&both, &[-&u, -&cr])
        } else if !linalg::is_zero_vec(&w) {
            linalg::solve_min_support(&vec![w], &[-u])
        } else if !linalg::is_zero_vec(&c) {
            linalg::solve_min_support(&vec![c], &[-cr])
        } else {
            Some(linalg::zero_vec(sph.len()))
        };
        let x = x.ok_or_else(|| QhError::Inconsistent("no rational section class normalizes u and c".into()))?;
        let mut coords = linalg::zero_vec(lat.rank());
        for (k, &g) in sph.iter().enumerate() {
            coords[g] = x[k].clone();
        }
        Ok(lat.key(&coords))
    }

    /// `ρ(φ) = Q_{σ_φ}`, checked to be a unit.
    pub fn rho(&self, cutoff: &Q) -> Result<QHClass> {
        let q = self.q_sigma(&self.sigma_phi()?, cutoff)?;
        match self.fiber_ring().is_unit(&q, cutoff)? {
            Some(_) => Ok(q),
            None => Err(QhError::NotInvertible(format!("ρ = {} is not a unit", q.format(&self.fiber)))),
        }
    }

    pub fn ic(&self) -> Result<ChernResidue> {
        chern_residue(&self.c_ref(), self.fiber.min_chern)
    }

    /// `Ī_c` computed from `σ_ref + B` for each integral spherical generator `B`.
    pub fn ic_independence_checks(&self) -> Vec<Check> {
        let lat = &self.fiber.h2;
        let base = self.ic();
        lat.spherical_indices()
            .into_iter()
            .map(|g| {
                let inst = format!("{} + {}", self.label, lat.generators[g]);
                let shifted = chern_residue(&(self.c_ref() + &lat.c1[g]), self.fiber.min_chern);
                match (&base, shifted) {
                    (Ok(a), Ok(b)) => Check::compare("Ic independent of section", inst, a, b),
                    (Err(e), _) => Check::skipped("Ic independent of section", inst, e.to_string()),
                    (_, Err(e)) => Check::skipped("Ic independent of section", inst, e.to_string()),
                }
            })
            .collect()
    }

    /// `Ψ(a) = Q_σ * a` and `Ψ(a * b) = Ψ(a) * b` on the basis, modulo `cutoff`.
    pub fn module_checks(&self, offset: &Exp, cutoff: &Q) -> Vec<Check> {
        let d = self.fiber.dim();
        let ring = self.fiber_ring();
        let m = &self.fiber;
        let mut out = Vec::new();
        let q = match self.q_sigma(offset, cutoff) {
            Ok(q) => q,
            Err(e) => return vec![Check::skipped("Psi(a) = Q * a", self.format_section(offset), e.to_string())],
        };
        let inner = cutoff + self.psi_margin(offset);
        for a in 0..d {
            let ea = QHClass::basis(d, a);
            let inst = m.label(a).to_string();
            let r = (|| -> Result<(QHClass, QHClass)> {
                Ok((self.psi(offset, &ea, cutoff)?, ring.product(&q, &ea, cutoff)?))
            })();
            out.push(match r {
                Ok((l, r)) => Check::compare("Psi(a) = Q * a", inst, l.format(m), r.format(m)),
                Err(e) => Check::skipped("Psi(a) = Q * a", inst, e.to_string()),
            });
            for b in 0..d {
                let eb = QHClass::basis(d, b);
                let inst = format!("({},{})", m.label(a), m.label(b));
                let r = (|| -> Result<(QHClass, QHClass)> {
                    let ab = ring.product(&ea, &eb, &inner)?;
                    let l = self.psi(offset, &ab, cutoff)?;
                    let r = ring.product(&self.psi(offset, &ea, cutoff)?, &eb, cutoff)?;
                    Ok((l, r))
                })();
                out.push(match r {
                    Ok((l, r)) => Check::compare("Psi(a*b) = Psi(a)*b", inst, l.format(m), r.format(m)),
                    Err(e) => Check::skipped("Psi(a*b) = Psi(a)*b", inst, e.to_string()),
                });
            }
        }
        out
    }

    /// `Ψ_{σ+A} = Ψ_σ ⊗ e^A` on the basis.
    pub fn shift_checks(&self, offset: &Exp, a: &Exp, cutoff: &Q) -> Vec<Check> {
        let d = self.fiber.dim();
        (0..d)
            .map(|i| {
                let inst = format!("{} at {}", self.fiber.label(i), self.format_section(&(offset + a)));
                let ei = QHClass::basis(d, i);
                let r = (|| -> Result<(QHClass, QHClass)> {
                    let l = self.psi(&(offset + a), &ei, cutoff)?;
                    let r = self.psi(offset, &ei, &(cutoff + &a.omega))?.shift(a).truncate(cutoff);
                    Ok((l, r))
                })();
                match r {
                    Ok((l, r)) => Check::compare("Psi shift", inst, l.format(&self.fiber), r.format(&self.fiber)),
                    Err(e) => Check::skipped("Psi shift", inst, e.to_string()),
                }
            })
            .collect()
    }

    fn same_fiber(&self, o: &SectionData) -> Result<()> {
        if self.fiber != o.fiber {
            return Err(QhError::FiberMismatch(format!("{} vs {}", self.fiber.name, o.fiber.name)));
        }
        if self.fiber_gw != o.fiber_gw {
            return Err(QhError::FiberMismatch("fiber invariants differ".into()));
        }
        Ok(())
    }

    fn lowest_energy(&self) -> Option<Q> {
        self.table.classes(2).iter().map(|k| self.table.energy(k)).min()
    }

    /// Section data of the composite loop, with `Ψ_composite = Ψ_other ∘ Ψ_self`.
    pub fn compose(&self, other: &SectionData) -> Result<SectionData> {
        self.same_fiber(other)?;
        let m = &self.fiber;
        let d = m.dim();
        let g = m.left_dual_basis();
        let cap = |own: &Option<Bound>, low_other: Option<Q>, other_bound: &Option<Bound>| -> Option<Bound> {
            let own = own.clone()?;
            let other_bound = other_bound.clone()?;
            let floor = match (low_other, other_bound) {
                (Some(l), Bound::Finite(b)) => Some(l.min(b)),
                (Some(l), Bound::Infinite) => Some(l),
                (None, Bound::Finite(b)) => Some(b),
                (None, Bound::Infinite) => None,
            };
            match (own, floor) {
                (Bound::Infinite, _) => Some(Bound::Infinite),
                (Bound::Finite(l), Some(f)) => Some(Bound::Finite(l + f)),
                (Bound::Finite(_), None) => Some(Bound::Infinite),
            }
        };
        let b1 = cap(self.table.bound(2), other.lowest_energy(), other.table.bound(2));
        let b2 = cap(other.table.bound(2), self.lowest_energy(), self.table.bound(2));
        let bound = match (b1, b2) {
            (Some(x), Some(y)) => Some(x.min(y)),
            _ => None,
        };
        let kind = TableKind::Section { u_ref: self.u_ref() + other.u_ref(), c_ref: self.c_ref() + other.c_ref() };
        let mut table = GWTable::new(kind, Completeness { three: None, two: bound, four: None });
        let mut acc: std::collections::BTreeMap<(usize, usize, Exp), Q> = Default::default();
        for k1 in self.table.classes(2) {
            for k2 in other.table.classes(2) {
                let k = &k1 + &k2;
                if !table.covers(2, &table.energy(&k)) {
                    continue;
                }
                for a in 0..d {
                    for j in 0..d {
                        let left = self.table.n2(m, a, j, &k1)?;
                        if left.is_zero() {
                            continue;
                        }
                        for b in 0..d {
                            let right = multilinear_fiber(&other.table, m, &g[j], b, &k2)?;
                            if !right.is_zero() {
                                *acc.entry((a, b, k.clone())).or_insert_with(Q::zero) += &left * right;
                            }
                        }
                    }
                }
            }
        }
        for ((a, b, k), v) in acc {
            if !v.is_zero() {
                table.insert(m, &[a, b], k, v)?;
            }
        }
        Ok(SectionData {
            label: format!("{} # {}", self.label, other.label),
            fiber: self.fiber.clone(),
            fiber_gw: self.fiber_gw.clone(),
            table,
        })
    }

    /// Section data of the inverse loop, from the Λ-inverse of `Ψ_{σ_ref}`,
    /// known up to energy `precision` above its reference section.
    pub fn mirror(&self, precision: &Q) -> Result<SectionData> {
        let m = &self.fiber;
        let d = m.dim();
        let (level, col_prec) = match self.table.bound(2) {
            Some(Bound::Infinite) => {
                let top = self.table.classes(2).iter().map(|k| self.table.energy(k)).max().unwrap_or_else(Q::zero);
                (top, None)
            }
            Some(Bound::Finite(l)) => (l.clone(), Some(l - self.u_ref())),
            None => return Err(self.table.incomplete(2, &self.u_ref())),
        };
        let zero = Exp::zero();
        let cols = (0..d).map(|j| self.psi_basis(&zero, j, &level)).collect::<Result<Vec<_>>>()?;
        let a: Vec<Vec<PNov>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| match &col_prec {
                        None => PNov::exact(cols[j].component(i)),
                        Some(p) => PNov::known_to(cols[j].component(i), p.clone()),
                    })
                    .collect()
            })
            .collect();
        let ident: Vec<Vec<PNov>> = (0..d)
            .map(|i| (0..d).map(|j| PNov::exact(if i == j { NovikovElement::one() } else { NovikovElement::zero() })).collect())
            .collect();
        let step = Q::one() + precision.abs();
        let mut w = precision + &step;
        let mut solved = None;
        for _ in 0..8 {
            match series::solve(&a, &ident, &w) {
                Solve::Singular => return Err(QhError::NotInvertible("Psi is singular".into())),
                Solve::Undecided => {}
                Solve::Solved(x) => {
                    let flat: Vec<PNov> = x.iter().flatten().cloned().collect();
                    if series::min_prec(&flat).is_none_or(|p| &p >= precision) {
                        solved = Some(x);
                        break;
                    }
                }
            }
            w = w + &step;
        }
        let n = solved.ok_or_else(|| QhError::NotInvertible("precision exhausted inverting Psi".into()))?;
        let exact = n.iter().flatten().all(|x| x.prec.is_none());
        let u = -self.u_ref();
        let kind = TableKind::Section { u_ref: u.clone(), c_ref: -self.c_ref() };
        let bound = if exact { Bound::Infinite } else { Bound::Finite(&u + precision) };
        let mut table = GWTable::new(kind, Completeness { three: None, two: Some(bound), four: None });
        for b in 0..d {
            // Ψ'(e_b) = Σ_c N[c][b] e_c, and n'(b, e; K) is the e^{−K} coefficient of Ψ'(e_b)·e
            for e in 0..d {
                let mut x = NovikovElement::zero();
                for (c, row) in n.iter().enumerate() {
                    let g = &m.pairing[c][e];
                    if !g.is_zero() {
                        x = x.add(&row[b].value.scale(g));
                    }
                }
                let x = if exact { x } else { x.truncate(precision) };
                for (k, v) in &x.terms {
                    table.insert(m, &[b, e], -k, v.clone())?;
                }
            }
        }
        Ok(SectionData { label: format!("-({})", self.label), fiber: m.clone(), fiber_gw: self.fiber_gw.clone(), table })
    }

    /// `Ψ_composite(a) = Ψ_second(Ψ_first(a))` on the basis, at the reference sections.
    pub fn composition_checks(first: &SectionData, second: &SectionData, composite: &SectionData, cutoff: &Q) -> Vec<Check> {
        let d = first.fiber.dim();
        let zero = Exp::zero();
        (0..d)
            .map(|i| {
                let inst = first.fiber.label(i).to_string();
                let ei = QHClass::basis(d, i);
                let r = (|| -> Result<(QHClass, QHClass)> {
                    let l = composite.psi(&zero, &ei, cutoff)?;
                    let inner = first.psi(&zero, &ei, &(cutoff + second.psi_margin(&zero)))?;
                    let r = second.psi(&zero, &inner, cutoff)?;
                    Ok((l, r))
                })();
                match r {
                    Ok((l, r)) => Check::compare("composite Psi", inst, l.format(&first.fiber), r.format(&first.fiber)),
                    Err(e) => Check::skipped("composite Psi", inst, e.to_string()),
                }
            })
            .collect()
    }

    /// `σ_φ` of the composite is the sum of the two normalized offsets.
    pub fn sigma_additivity_check(first: &SectionData, second: &SectionData, composite: &SectionData) -> Check {
        let r = (|| -> Result<(Exp, Exp)> {
            Ok((composite.sigma_phi()?, &first.sigma_phi()? + &second.sigma_phi()?))
        })();
        let lat = &first.fiber.h2;
        match r {
            Ok((l, r)) => Check::compare("sigma_phi additive", "composite", lat.format_exp(&l), lat.format_exp(&r)),
            Err(e) => Check::skipped("sigma_phi additive", "composite", e.to_string()),
        }
    }
}

/// `n(x, e_b; K)` for a fiber class `x` given in coordinates.
fn multilinear_fiber(t: &GWTable, m: &ManifoldModel, x: &[Q], b: usize, k: &Exp) -> Result<Q> {
    let mut acc = Q::zero();
    for (i, c) in x.iter().enumerate() {
        if !c.is_zero() {
            acc += c * t.n2(m, i, b, k)?;
        }
    }
    Ok(acc)
}
