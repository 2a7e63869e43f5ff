//! Smith normal form with transform tracking, column Hermite form, and
//! integer kernels.
//!
//! The Smith routine keeps the full identity U·M·V = D. Pivots are always
//! the nonzero entry of minimal absolute value in the working submatrix,
//! ties broken by row-major position, so decompositions are deterministic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// U·M·V = D with U, V unimodular and D diagonal, each diagonal entry
/// nonnegative and dividing the next.
#[derive(Debug, Clone)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SnfDecomposition {
    pub fn diagonal(&self) -> Vec<BigInt> {
        let k = self.d.rows().min(self.d.cols());
        (0..k).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

fn row_swap(m: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols() {
        let x = m[(a, j)].clone();
        let y = m[(b, j)].clone();
        m[(a, j)] = y;
        m[(b, j)] = x;
    }
}

fn col_swap(m: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.rows() {
        let x = m[(i, a)].clone();
        let y = m[(i, b)].clone();
        m[(i, a)] = y;
        m[(i, b)] = x;
    }
}

/// row a -= q * row b
fn row_sub(m: &mut IntMatrix, a: usize, b: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for j in 0..m.cols() {
        let delta = q * &m[(b, j)];
        m[(a, j)] -= delta;
    }
}

/// col a -= q * col b
fn col_sub(m: &mut IntMatrix, a: usize, b: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for i in 0..m.rows() {
        let delta = q * &m[(i, b)];
        m[(i, a)] -= delta;
    }
}

fn row_negate(m: &mut IntMatrix, a: usize) {
    for j in 0..m.cols() {
        let x = -m[(a, j)].clone();
        m[(a, j)] = x;
    }
}

fn col_negate(m: &mut IntMatrix, a: usize) {
    for i in 0..m.rows() {
        let x = -m[(i, a)].clone();
        m[(i, a)] = x;
    }
}

/// Nonzero entry of minimal absolute value in the submatrix starting at
/// (t, t), scanning row-major so ties pick the earliest position.
fn find_pivot(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            if d[(i, j)].is_zero() {
                continue;
            }
            match best {
                None => best = Some((i, j)),
                Some(b) => {
                    if d[(i, j)].abs() < d[b].abs() {
                        best = Some((i, j));
                    }
                }
            }
        }
    }
    best
}

/// Diagonalize position t; returns false when the submatrix is all zero.
fn place(d: &mut IntMatrix, u: &mut IntMatrix, v: &mut IntMatrix, t: usize) -> bool {
    loop {
        let (pi, pj) = match find_pivot(d, t) {
            None => return false,
            Some(p) => p,
        };
        row_swap(d, t, pi);
        row_swap(u, t, pi);
        col_swap(d, t, pj);
        col_swap(v, t, pj);

        let mut dirty = false;
        for i in t + 1..d.rows() {
            if d[(i, t)].is_zero() {
                continue;
            }
            let q = d[(i, t)].div_floor(&d[(t, t)]);
            row_sub(d, i, t, &q);
            row_sub(u, i, t, &q);
            if !d[(i, t)].is_zero() {
                dirty = true;
            }
        }
        for j in t + 1..d.cols() {
            if d[(t, j)].is_zero() {
                continue;
            }
            let q = d[(t, j)].div_floor(&d[(t, t)]);
            col_sub(d, j, t, &q);
            col_sub(v, j, t, &q);
            if !d[(t, j)].is_zero() {
                dirty = true;
            }
        }
        if !dirty {
            return true;
        }
    }
}

/// Smith normal form of an arbitrary rectangular integer matrix.
pub fn snf(m: &IntMatrix) -> SnfDecomposition {
    let rows = m.rows();
    let cols = m.cols();
    let steps = rows.min(cols);
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for t in 0..steps {
        if !place(&mut d, &mut u, &mut v, t) {
            break;
        }
    }

    // Enforce the divisibility chain d_i | d_{i+1}.
    'chain: loop {
        for i in 0..steps.saturating_sub(1) {
            let a = d[(i, i)].clone();
            let b = d[(i + 1, i + 1)].clone();
            if a.is_zero() || (&b % &a).is_zero() {
                continue;
            }
            col_sub(&mut d, i, i + 1, &-BigInt::one());
            col_sub(&mut v, i, i + 1, &-BigInt::one());
            for t in i..steps {
                if !place(&mut d, &mut u, &mut v, t) {
                    break;
                }
            }
            continue 'chain;
        }
        break;
    }

    for i in 0..steps {
        if d[(i, i)].is_negative() {
            row_negate(&mut d, i);
            row_negate(&mut u, i);
        }
    }

    debug_assert_eq!(u.mul(m).mul(&v), d, "snf transform identity broken");
    SnfDecomposition { u, d, v }
}

/// Column Hermite form of a nonsingular square matrix: H = B·W with W
/// unimodular, H lower triangular, positive diagonal, and each entry left
/// of the diagonal reduced into [0, diagonal of its row).
pub fn hermite_columns(b: &IntMatrix) -> IntMatrix {
    assert!(b.is_square(), "hermite form of non-square matrix");
    let n = b.rows();
    let mut h = b.clone();
    for r in 0..n {
        loop {
            let mut best: Option<usize> = None;
            for j in r..n {
                if h[(r, j)].is_zero() {
                    continue;
                }
                match best {
                    None => best = Some(j),
                    Some(bj) => {
                        if h[(r, j)].abs() < h[(r, bj)].abs() {
                            best = Some(j);
                        }
                    }
                }
            }
            let pivot = best.expect("singular matrix in hermite_columns");
            col_swap(&mut h, r, pivot);
            let mut clean = true;
            for j in r + 1..n {
                if h[(r, j)].is_zero() {
                    continue;
                }
                let q = h[(r, j)].div_floor(&h[(r, r)]);
                col_sub(&mut h, j, r, &q);
                if !h[(r, j)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h[(r, r)].is_negative() {
            col_negate(&mut h, r);
        }
        for j in 0..r {
            let q = h[(r, j)].div_floor(&h[(r, r)]);
            col_sub(&mut h, j, r, &q);
        }
    }
    h
}

/// Basis of {x : M·x = 0} over the integers, returned as matrix columns.
/// The basis is saturated: it generates the full kernel lattice.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let dec = snf(m);
    let rank = dec.rank();
    let cols = m.cols();
    let mut k = IntMatrix::zeros(cols, cols - rank);
    for (out, j) in (rank..cols).enumerate() {
        for i in 0..cols {
            k[(i, out)] = dec.v[(i, j)].clone();
        }
    }
    debug_assert!(
        m.mul(&k) == IntMatrix::zeros(m.rows(), cols - rank),
        "kernel basis does not annihilate"
    );
    k
}
