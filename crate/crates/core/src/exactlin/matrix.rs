//! Dense matrices and vectors over arbitrary-precision scalars.
//!
//! Everything here is exact: integer entries are `BigInt`, rational entries
//! are `BigRational` (always reduced, positive denominator). No floating
//! point enters this module.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        IntMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix::new(rows, cols, vec![BigInt::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix::new(r, c, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in mul_vec");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        IntMatrix::new(self.rows, self.cols, data)
    }

    pub fn scale(&self, s: &BigInt) -> IntMatrix {
        let data = self.data.iter().map(|a| a * s).collect();
        IntMatrix::new(self.rows, self.cols, data)
    }

    /// Divide every entry by `d`, which must divide exactly.
    pub fn div_exact(&self, d: &BigInt) -> IntMatrix {
        assert!(!d.is_zero());
        let data = self
            .data
            .iter()
            .map(|a| {
                debug_assert!((a % d).is_zero(), "entry not divisible");
                a / d
            })
            .collect();
        IntMatrix::new(self.rows, self.cols, data)
    }

    pub fn to_rat(&self) -> RatMatrix {
        let data = self
            .data
            .iter()
            .map(|a| BigRational::from_integer(a.clone()))
            .collect();
        RatMatrix::new(self.rows, self.cols, data)
    }

    /// Determinant by the Bareiss fraction-free algorithm. Panics on a
    /// non-square matrix; all intermediate divisions are exact.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "det of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[(k, k)].is_zero() {
                let swap = (k + 1..n).find(|&i| !m[(i, k)].is_zero());
                match swap {
                    None => return BigInt::zero(),
                    Some(i) => {
                        for j in 0..n {
                            let a = m[(k, j)].clone();
                            let b = m[(i, j)].clone();
                            m[(k, j)] = b;
                            m[(i, j)] = a;
                        }
                        sign = -sign;
                    }
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)];
                    m[(i, j)] = num / &prev;
                }
                m[(i, k)] = BigInt::zero();
            }
            prev = m[(k, k)].clone();
        }
        sign * m[(n - 1, n - 1)].clone()
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// Row-major rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigRational>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        RatMatrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix::new(rows, cols, vec![BigRational::zero(); rows * cols])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut t = RatMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn scale(&self, s: &BigRational) -> RatMatrix {
        let data = self.data.iter().map(|a| a * s).collect();
        RatMatrix::new(self.rows, self.cols, data)
    }

    pub fn sub(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        RatMatrix::new(self.rows, self.cols, data)
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = RatMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    pub fn mul_int(&self, other: &IntMatrix) -> RatMatrix {
        self.mul(&other.to_rat())
    }

    pub fn mul_vec(&self, v: &RatVector) -> RatVector {
        assert_eq!(self.cols, v.len(), "dimension mismatch in mul_vec");
        let coords = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| &self[(i, j)] * &v[j])
                    .fold(BigRational::zero(), |acc, x| acc + x)
            })
            .collect();
        RatVector::new(coords)
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|a| a.is_integer())
    }

    pub fn to_int(&self) -> Option<IntMatrix> {
        if !self.is_integral() {
            return None;
        }
        let data = self.data.iter().map(|a| a.to_integer()).collect();
        Some(IntMatrix::new(self.rows, self.cols, data))
    }

    /// Determinant by Gaussian elimination over the rationals.
    pub fn det(&self) -> BigRational {
        assert!(self.is_square(), "det of non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = BigRational::one();
        for k in 0..n {
            let pivot = match (k..n).find(|&i| !m[(i, k)].is_zero()) {
                None => return BigRational::zero(),
                Some(i) => i,
            };
            if pivot != k {
                for j in 0..n {
                    let a = m[(k, j)].clone();
                    let b = m[(pivot, j)].clone();
                    m[(k, j)] = b;
                    m[(pivot, j)] = a;
                }
                det = -det;
            }
            det *= m[(k, k)].clone();
            for i in k + 1..n {
                if m[(i, k)].is_zero() {
                    continue;
                }
                let f = &m[(i, k)] / &m[(k, k)];
                for j in k..n {
                    let delta = &f * &m[(k, j)];
                    m[(i, j)] -= delta;
                }
            }
        }
        det
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = BigRational;

    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.data[i * self.cols + j]
    }
}

/// Rational column vector. Ordering is lexicographic, which gives all
/// solution lists and fiber listings a canonical order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RatVector(Vec<BigRational>);

impl RatVector {
    pub fn new(coords: Vec<BigRational>) -> Self {
        RatVector(coords)
    }

    pub fn zeros(n: usize) -> Self {
        RatVector(vec![BigRational::zero(); n])
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        RatVector(
            coords
                .iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect(),
        )
    }

    /// Build from (numerator, denominator) pairs; handy in tests.
    pub fn from_ratios(pairs: &[(i64, i64)]) -> Self {
        RatVector(
            pairs
                .iter()
                .map(|&(p, q)| BigRational::new(BigInt::from(p), BigInt::from(q)))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, BigRational> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[BigRational] {
        &self.0
    }

    pub fn add(&self, other: &RatVector) -> RatVector {
        assert_eq!(self.len(), other.len());
        RatVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RatVector) -> RatVector {
        assert_eq!(self.len(), other.len());
        RatVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, s: &BigRational) -> RatVector {
        RatVector(self.0.iter().map(|a| a * s).collect())
    }

    pub fn dot(&self, other: &RatVector) -> BigRational {
        assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a * b)
            .fold(BigRational::zero(), |acc, x| acc + x)
    }

    /// Componentwise representative in [0, 1).
    pub fn reduce_mod1(&self) -> RatVector {
        RatVector(self.0.iter().map(|a| a - a.floor()).collect())
    }

    pub fn floor_parts(&self) -> Vec<BigInt> {
        self.0.iter().map(|a| a.floor().to_integer()).collect()
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|a| a.is_integer())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|a| a.is_zero())
    }
}

impl Index<usize> for RatVector {
    type Output = BigRational;

    fn index(&self, i: usize) -> &BigRational {
        &self.0[i]
    }
}

impl fmt::Display for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", x)?;
        }
        write!(f, ")")
    }
}

/// Least common multiple of the denominators of `xs`.
pub(crate) fn denominator_lcm<'a>(xs: impl Iterator<Item = &'a BigRational>) -> BigInt {
    use num_integer::Integer;
    let mut l = BigInt::one();
    for x in xs {
        l = l.lcm(x.denom());
    }
    l
}

/// Sign of a big integer as a small machine integer.
pub(crate) fn sign_of(x: &BigInt) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}
