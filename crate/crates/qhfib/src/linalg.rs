//! Dense exact linear algebra over `Q`. Row-major `Vec<Vec<Q>>`.

use crate::rational::Q;
use num_traits::{One, Zero};

pub type Mat = Vec<Vec<Q>>;

pub fn zeros(rows: usize, cols: usize) -> Mat {
    vec![vec![Q::zero(); cols]; rows]
}

pub fn zero_vec(n: usize) -> Vec<Q> {
    vec![Q::zero(); n]
}

pub fn identity(n: usize) -> Mat {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Q::one();
    }
    m
}

pub fn unit_vec(n: usize, i: usize) -> Vec<Q> {
    let mut v = zero_vec(n);
    v[i] = Q::one();
    v
}

pub fn cols(m: &Mat) -> usize {
    m.first().map_or(0, |r| r.len())
}

pub fn transpose(m: &Mat) -> Mat {
    let (r, c) = (m.len(), cols(m));
    let mut t = zeros(c, r);
    for i in 0..r {
        for j in 0..c {
            t[j][i] = m[i][j].clone();
        }
    }
    t
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let (r, k, c) = (a.len(), b.len(), cols(b));
    let mut out = zeros(r, c);
    for i in 0..r {
        for l in 0..k {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..c {
                if !b[l][j].is_zero() {
                    out[i][j] += &a[i][l] * &b[l][j];
                }
            }
        }
    }
    out
}

/// `m · v` (column vector).
pub fn mat_vec(m: &Mat, v: &[Q]) -> Vec<Q> {
    m.iter().map(|row| dot(row, v)).collect()
}

/// `v · m` (row vector).
pub fn vec_mat(v: &[Q], m: &Mat) -> Vec<Q> {
    let mut out = zero_vec(cols(m));
    for (i, vi) in v.iter().enumerate() {
        if vi.is_zero() {
            continue;
        }
        for (j, mij) in m[i].iter().enumerate() {
            if !mij.is_zero() {
                out[j] += vi * mij;
            }
        }
    }
    out
}

pub fn dot(u: &[Q], v: &[Q]) -> Q {
    let mut s = Q::zero();
    for (a, b) in u.iter().zip(v) {
        if !a.is_zero() && !b.is_zero() {
            s += a * b;
        }
    }
    s
}

pub fn add_scaled(acc: &mut [Q], c: &Q, v: &[Q]) {
    if c.is_zero() {
        return;
    }
    for (a, b) in acc.iter_mut().zip(v) {
        if !b.is_zero() {
            *a += c * b;
        }
    }
}

pub fn is_zero_vec(v: &[Q]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// Reduced row echelon form and the pivot columns, scanning columns in order.
pub fn rref(m: &Mat) -> (Mat, Vec<usize>) {
    let mut a = m.clone();
    let (r, c) = (a.len(), cols(&a));
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..c {
        if row == r {
            break;
        }
        let Some(p) = (row..r).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let inv = Q::one() / &a[row][col];
        for x in a[row].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[row].clone();
        for (i, other) in a.iter_mut().enumerate() {
            if i != row && !other[col].is_zero() {
                let f = other[col].clone();
                for (x, y) in other.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, pivots)
}

pub fn rank(m: &Mat) -> usize {
    rref(m).1.len()
}

pub fn inverse(m: &Mat) -> Option<Mat> {
    let n = m.len();
    if n == 0 {
        return Some(Vec::new());
    }
    if cols(m) != n {
        return None;
    }
    let mut aug = zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug[i][j] = m[i][j].clone();
        }
        aug[i][n + i] = Q::one();
    }
    let (red, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(red.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Solves `m x = b`. Free variables are set to zero, so the solution is
/// supported on the pivot columns (earliest columns win).
pub fn solve_min_support(m: &Mat, b: &[Q]) -> Option<Vec<Q>> {
    let (r, c) = (m.len(), cols(m));
    let mut aug = zeros(r, c + 1);
    for i in 0..r {
        for j in 0..c {
            aug[i][j] = m[i][j].clone();
        }
        aug[i][c] = b[i].clone();
    }
    let (red, pivots) = rref(&aug);
    if pivots.last() == Some(&c) {
        return None;
    }
    let mut x = zero_vec(c);
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = red[row][c].clone();
    }
    Some(x)
}
