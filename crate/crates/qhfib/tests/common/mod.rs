//! Random pairings on `H_*(M)` and on a total space built from `ι` and an
//! uncorrected splitting `s′`, for exercising `correct_splitting`.

#![allow(dead_code)]

use qhfib::linalg::{self, Mat};
use qhfib::manifold::{koszul, BasisElement, ManifoldModel};
use qhfib::novikov::H2Lattice;
use qhfib::rational::Q;
use num_traits::{One, Zero};
use rand::Rng;

pub struct Synthetic {
    pub fiber: ManifoldModel,
    pub total: ManifoldModel,
    pub iota: Mat,
    pub s_prime: Mat,
    /// Number of nonzero `q_ij = s′(e_i)·s′(e_j)` with `i ≤ j`.
    pub nonzero_q: usize,
}

fn nonzero(rng: &mut impl Rng) -> Q {
    let mut p = 0i64;
    while p == 0 {
        p = rng.gen_range(-6..=6);
    }
    Q::new(p.into(), rng.gen_range(1i64..=4).into())
}

/// A 2×2 block with nonzero determinant.
fn invertible(rng: &mut impl Rng, symmetric: bool) -> [[Q; 2]; 2] {
    loop {
        let a = nonzero(rng);
        let b = nonzero(rng);
        let c = if symmetric { b.clone() } else { nonzero(rng) };
        let d = nonzero(rng);
        if &a * &d != &b * &c {
            return [[a, b], [c, d]];
        }
    }
}

fn lattice() -> H2Lattice {
    H2Lattice::new(vec!["A".into()], vec![Q::one()], vec![Q::zero()], vec![true]).unwrap()
}

fn set(g: &mut Mat, deg: &[u32], i: usize, j: usize, v: Q) {
    g[j][i] = &v * koszul(deg[i], deg[j]);
    g[i][j] = v;
}

/// `n = 2` carries a degree-1 block and `n = 3` a degree-2 block, so both
/// exercise the half-weight correction.
pub fn synthetic(n: u32, rng: &mut impl Rng) -> Synthetic {
    let basis: Vec<(&str, u32)> = match n {
        2 => vec![("M", 4), ("a", 3), ("b", 3), ("x", 2), ("y", 2), ("c", 1), ("d", 1), ("pt", 0)],
        3 => vec![("M", 6), ("p", 4), ("q", 4), ("a", 3), ("b", 3), ("x", 2), ("y", 2), ("pt", 0)],
        _ => panic!("n = {n}"),
    };
    let m = basis.len();
    let deg: Vec<u32> = basis.iter().map(|b| b.1).collect();
    let mut g = linalg::zeros(m, m);
    set(&mut g, &deg, 0, m - 1, Q::one());
    match n {
        2 => {
            let odd = invertible(rng, false);
            let even = invertible(rng, true);
            for r in 0..2 {
                for c in 0..2 {
                    set(&mut g, &deg, 1 + r, 5 + c, odd[r][c].clone());
                    set(&mut g, &deg, 3 + r, 3 + c, even[r][c].clone());
                }
            }
        }
        _ => {
            let blk = invertible(rng, false);
            for r in 0..2 {
                for c in 0..2 {
                    set(&mut g, &deg, 5 + r, 1 + c, blk[r][c].clone());
                }
            }
            set(&mut g, &deg, 3, 4, nonzero(rng));
        }
    }
    let fb = basis.iter().map(|(l, d)| BasisElement { label: l.to_string(), degree: *d }).collect();
    let fiber = ManifoldModel::new("synthetic", n, fb, g.clone(), None, lattice(), 0).unwrap();

    let mut tdeg: Vec<u32> = deg.clone();
    tdeg.extend(deg.iter().map(|d| d + 2));
    let mut tg = linalg::zeros(2 * m, 2 * m);
    for i in 0..m {
        for j in 0..m {
            tg[i][m + j] = g[i][j].clone();
            tg[m + j][i] = g[j][i].clone();
        }
    }
    let mut nonzero_q = 0;
    for i in 0..m {
        for j in i..m {
            if deg[i] + deg[j] + 2 != 2 * n || (i == j && deg[i] % 2 == 1) {
                continue;
            }
            set(&mut tg, &tdeg, m + i, m + j, nonzero(rng));
            nonzero_q += 1;
        }
    }
    let tb = basis
        .iter()
        .map(|(l, d)| BasisElement { label: format!("i({l})"), degree: *d })
        .chain(basis.iter().map(|(l, d)| BasisElement { label: format!("s({l})"), degree: d + 2 }))
        .collect();
    let total = ManifoldModel::new("synthetic total", n + 1, tb, tg, None, lattice(), 0).unwrap();
    let iota = (0..m).map(|i| linalg::unit_vec(2 * m, i)).collect();
    let s_prime = (0..m).map(|i| linalg::unit_vec(2 * m, m + i)).collect();
    Synthetic { fiber, total, iota, s_prime, nonzero_q }
}

/// Every failure of `s(e_i)·ι(f_j) = δ_ij` and `s(e_i)·s(f_j) = 0`.
pub fn splitting_defects(syn: &Synthetic, s: &Mat) -> Vec<String> {
    let (fiber, total) = (&syn.fiber, &syn.total);
    let f = fiber.dual_basis();
    let mut out = Vec::new();
    for i in 0..fiber.dim() {
        for (j, fj) in f.iter().enumerate() {
            let want = if i == j { Q::one() } else { Q::zero() };
            let a = total.intersect(&s[i], &linalg::vec_mat(fj, &syn.iota));
            if a != want {
                out.push(format!("s({}).i(f_{j}) = {a}", fiber.label(i)));
            }
            let b = total.intersect(&s[i], &linalg::vec_mat(fj, s));
            if !b.is_zero() {
                out.push(format!("s({}).s(f_{j}) = {b}", fiber.label(i)));
            }
        }
    }
    out
}
