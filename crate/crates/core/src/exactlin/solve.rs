//! Exact solvers: integer lattice systems, congruences on the torus, and
//! the affine-lattice intersection decision.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::{denominator_lcm, IntMatrix, RatMatrix, RatVector};
use super::snf::snf;
use crate::error::Error;

/// Some integer solution z of M·z = b, or None when the lattice misses b.
pub fn solve_lattice(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(b.len(), m.rows(), "right-hand side has wrong length");
    let dec = snf(m);
    let c = dec.u.mul_vec(b);
    let k = m.rows().min(m.cols());
    let mut y = vec![BigInt::zero(); m.cols()];
    for i in 0..m.rows() {
        let di = if i < k {
            dec.d[(i, i)].clone()
        } else {
            BigInt::zero()
        };
        if di.is_zero() {
            if !c[i].is_zero() {
                return None;
            }
        } else {
            let (q, r) = c[i].div_rem(&di);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    let z = dec.v.mul_vec(&y);
    debug_assert_eq!(m.mul_vec(&z), b, "lattice solution does not verify");
    Some(z)
}

/// All t in [0,1)^q with M·t = b + n·z for some integer vector z, sorted
/// lexicographically. The solution set is the coset M^{-1}b + n·M^{-1}Z^q,
/// so we enumerate its |det M| classes modulo n·Z^q and keep the class
/// representatives that land in the unit box.
pub fn solve_torus_congruence(
    m: &IntMatrix,
    b: &RatVector,
    n: usize,
) -> Result<Vec<RatVector>, Error> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let q = m.rows();
    if b.len() != q {
        return Err(Error::DimensionMismatch {
            expected: q,
            found: b.len(),
        });
    }
    assert!(n >= 1, "modulus must be at least 1");

    let dec = snf(m);
    let diag = dec.diagonal();
    if diag.iter().any(|d| d.is_zero()) {
        return Err(Error::DegenerateMatrix);
    }

    // Base point x0 = V·D^{-1}·U·b and lattice directions (n/d_i)·V e_i.
    let ub = dec.u.to_rat().mul_vec(b);
    let s0 = RatVector::new(
        (0..q)
            .map(|i| &ub[i] / BigRational::from_integer(diag[i].clone()))
            .collect(),
    );
    let x0 = dec.v.to_rat().mul_vec(&s0);
    let nbig = BigInt::from(n);
    let dirs: Vec<RatVector> = (0..q)
        .map(|i| {
            let f = BigRational::new(nbig.clone(), diag[i].clone());
            RatVector::new(
                dec.v
                    .col(i)
                    .into_iter()
                    .map(|x| BigRational::from_integer(x) * &f)
                    .collect(),
            )
        })
        .collect();

    // Clear denominators once so the enumeration runs on integers.
    let d_all = denominator_lcm(x0.iter().chain(dirs.iter().flat_map(|v| v.iter())));
    let scale = BigRational::from_integer(d_all.clone());
    let x0i: Vec<BigInt> = x0.iter().map(|x| (x * &scale).to_integer()).collect();
    let dirsi: Vec<Vec<BigInt>> = dirs
        .iter()
        .map(|v| v.iter().map(|x| (x * &scale).to_integer()).collect())
        .collect();
    let modulus = &d_all * &nbig;

    let radix: Vec<usize> = diag
        .iter()
        .map(|d| d.to_usize().expect("solution count too large to enumerate"))
        .collect();

    let mut digits = vec![0usize; q];
    let mut x = x0i;
    let mut out = Vec::new();
    loop {
        let mut coords = Vec::with_capacity(q);
        for xi in &x {
            let r = xi.mod_floor(&modulus);
            if r >= d_all {
                break;
            }
            coords.push(BigRational::new(r, d_all.clone()));
        }
        if coords.len() == q {
            out.push(RatVector::new(coords));
        }

        let mut pos = 0;
        while pos < q {
            digits[pos] += 1;
            if digits[pos] < radix[pos] {
                for (xi, wi) in x.iter_mut().zip(&dirsi[pos]) {
                    *xi += wi;
                }
                break;
            }
            let back = BigInt::from(radix[pos] as u64 - 1);
            digits[pos] = 0;
            for (xi, wi) in x.iter_mut().zip(&dirsi[pos]) {
                *xi -= &back * wi;
            }
            pos += 1;
        }
        if pos == q {
            break;
        }
    }
    out.sort();
    debug_assert!(out.iter().all(|t| {
        let lhs = m.to_rat().mul_vec(t).sub(b);
        lhs.iter()
            .all(|x| (x / BigRational::from_integer(nbig.clone())).is_integer())
    }));
    Ok(out)
}

/// Outcome of the affine-lattice intersection decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeHit {
    Empty,
    Witness { t: RatVector, z: Vec<BigInt> },
}

/// Decide whether the affine subspace {C·t + w : t real} meets Z^q.
///
/// A primitive integer basis K of the rational left kernel of C reduces the
/// question to whether K·w lies in the lattice K·Z^q; a positive answer is
/// turned into an exact witness by solving C·t = z - w over the rationals.
pub fn affine_lattice_hit(c: &RatMatrix, w: &RatVector) -> LatticeHit {
    assert_eq!(c.rows(), w.len(), "offset has wrong length");
    let k = left_kernel_primitive(c);
    let z: Vec<BigInt> = if k.rows() == 0 {
        vec![BigInt::zero(); c.rows()]
    } else {
        let kw = k.to_rat().mul_vec(w);
        if !kw.is_integral() {
            return LatticeHit::Empty;
        }
        let kw_int: Vec<BigInt> = kw.iter().map(|x| x.to_integer()).collect();
        match solve_lattice(&k, &kw_int) {
            None => return LatticeHit::Empty,
            Some(z) => z,
        }
    };
    let rhs = RatVector::new(
        z.iter()
            .zip(w.iter())
            .map(|(zi, wi)| BigRational::from_integer(zi.clone()) - wi)
            .collect(),
    );
    let t = rational_solve(c, &rhs).expect("kernel test guarantees a consistent system");
    debug_assert!(c.mul_vec(&t).add(w).iter().zip(&z).all(|(x, zi)| {
        x.is_integer() && x.to_integer() == *zi
    }));
    LatticeHit::Witness { t, z }
}

/// Primitive integer basis (as rows) of {y : y^T C = 0} over the rationals.
fn left_kernel_primitive(c: &RatMatrix) -> IntMatrix {
    let basis = rational_nullspace(&c.transpose());
    let q = c.rows();
    let mut data = Vec::with_capacity(basis.len() * q);
    for v in &basis {
        data.extend(primitive_integer(v));
    }
    IntMatrix::new(basis.len(), q, data)
}

/// Scale a nonzero rational vector to integer entries with content 1 and a
/// positive leading entry.
fn primitive_integer(v: &RatVector) -> Vec<BigInt> {
    let l = denominator_lcm(v.iter());
    let scale = BigRational::from_integer(l);
    let mut ints: Vec<BigInt> = v.iter().map(|x| (x * &scale).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    assert!(!g.is_zero(), "primitive scaling of the zero vector");
    let lead_negative = ints
        .iter()
        .find(|x| !x.is_zero())
        .map(|x| x.is_negative())
        .unwrap_or(false);
    if lead_negative {
        g = -g;
    }
    for x in &mut ints {
        *x = &*x / &g;
    }
    ints
}

/// Reduced row echelon form; returns the pivot columns alongside.
fn rref(m: &RatMatrix) -> (RatMatrix, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols() {
        if row == a.rows() {
            break;
        }
        let p = match (row..a.rows()).find(|&i| !a[(i, col)].is_zero()) {
            None => continue,
            Some(p) => p,
        };
        if p != row {
            for j in 0..a.cols() {
                let x = a[(row, j)].clone();
                let y = a[(p, j)].clone();
                a[(row, j)] = y;
                a[(p, j)] = x;
            }
        }
        let inv = a[(row, col)].clone();
        for j in 0..a.cols() {
            let x = &a[(row, j)] / &inv;
            a[(row, j)] = x;
        }
        for i in 0..a.rows() {
            if i == row || a[(i, col)].is_zero() {
                continue;
            }
            let f = a[(i, col)].clone();
            for j in 0..a.cols() {
                let delta = &f * &a[(row, j)];
                a[(i, j)] -= delta;
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, pivots)
}

/// Basis of {x : M·x = 0} over the rationals.
fn rational_nullspace(m: &RatMatrix) -> Vec<RatVector> {
    let (a, pivots) = rref(m);
    let mut basis = Vec::new();
    for free in 0..m.cols() {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![BigRational::zero(); m.cols()];
        v[free] = BigRational::one();
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = -a[(i, free)].clone();
        }
        basis.push(RatVector::new(v));
    }
    basis
}

/// Particular rational solution of C·t = rhs with free variables set to
/// zero, or None when the system is inconsistent.
fn rational_solve(c: &RatMatrix, rhs: &RatVector) -> Option<RatVector> {
    let rows = c.rows();
    let cols = c.cols();
    let mut aug = RatMatrix::zeros(rows, cols + 1);
    for i in 0..rows {
        for j in 0..cols {
            aug[(i, j)] = c[(i, j)].clone();
        }
        aug[(i, cols)] = rhs[i].clone();
    }
    let (a, pivots) = rref(&aug);
    if pivots.contains(&cols) {
        return None;
    }
    let mut t = vec![BigRational::zero(); cols];
    for (i, &pc) in pivots.iter().enumerate() {
        t[pc] = a[(i, cols)].clone();
    }
    Some(RatVector::new(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn big(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn lattice_line() {
        let m = IntMatrix::from_i64(&[&[1, 1]]);
        let z = solve_lattice(&m, &big(&[5])).unwrap();
        assert_eq!(m.mul_vec(&z), big(&[5]));
    }

    #[test]
    fn lattice_misses() {
        let m = IntMatrix::from_i64(&[&[2, 0], &[0, 2]]);
        assert_eq!(solve_lattice(&m, &big(&[1, 0])), None);
        let m = IntMatrix::from_i64(&[&[2, 4]]);
        assert_eq!(solve_lattice(&m, &big(&[3])), None);
        assert!(solve_lattice(&m, &big(&[6])).is_some());
    }

    #[test]
    fn congruence_frozen_examples() {
        let m = IntMatrix::from_i64(&[&[1, 0], &[-3, -2]]);
        let sols = solve_torus_congruence(&m, &RatVector::from_i64(&[2, 2]), 2).unwrap();
        assert_eq!(sols, vec![RatVector::from_i64(&[0, 0])]);

        let m = IntMatrix::from_i64(&[&[3, 0], &[-1, -2]]);
        let sols = solve_torus_congruence(&m, &RatVector::from_i64(&[1, 1]), 2).unwrap();
        assert_eq!(sols, vec![RatVector::from_ratios(&[(1, 3), (1, 3)])]);
    }

    #[test]
    fn congruence_circle_cases() {
        let m = IntMatrix::from_i64(&[&[2]]);
        let empty = solve_torus_congruence(&m, &RatVector::from_i64(&[2]), 4).unwrap();
        assert!(empty.is_empty());
        let zero = solve_torus_congruence(&m, &RatVector::from_i64(&[4]), 4).unwrap();
        assert_eq!(zero, vec![RatVector::from_i64(&[0])]);
        let half = solve_torus_congruence(&m, &RatVector::from_i64(&[1]), 4).unwrap();
        assert_eq!(half, vec![RatVector::from_ratios(&[(1, 2)])]);
    }

    #[test]
    fn congruence_rejects_singular() {
        let m = IntMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(
            solve_torus_congruence(&m, &RatVector::from_i64(&[0, 0]), 2),
            Err(Error::DegenerateMatrix)
        );
    }

    /// Brute force over every rational in [0,1)^2 whose denominator divides
    /// |det M|·n.
    fn brute_congruence(m: &IntMatrix, b: &RatVector, n: usize) -> Vec<RatVector> {
        let den = (m.det().abs() * BigInt::from(n)).to_usize().unwrap();
        let q = m.rows();
        let mut idx = vec![0usize; q];
        let mut out = Vec::new();
        loop {
            let t = RatVector::new(
                idx.iter()
                    .map(|&p| BigRational::new(BigInt::from(p as u64), BigInt::from(den as u64)))
                    .collect(),
            );
            let diff = m.to_rat().mul_vec(&t).sub(b);
            let nn = BigRational::from_integer(BigInt::from(n as u64));
            if diff.iter().all(|x| (x / &nn).is_integer()) {
                out.push(t);
            }
            let mut pos = 0;
            while pos < q {
                idx[pos] += 1;
                if idx[pos] < den {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
            if pos == q {
                break;
            }
        }
        out.sort();
        out
    }

    #[test]
    fn congruence_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let mut tried = 0;
        while tried < 40 {
            let m = IntMatrix::new(
                2,
                2,
                (0..4).map(|_| BigInt::from(rng.gen_range(-4i64..=4))).collect(),
            );
            let det = m.det().abs();
            if det.is_zero() || det > BigInt::from(12) {
                continue;
            }
            tried += 1;
            let n = rng.gen_range(1..=3);
            let b = RatVector::from_i64(&[rng.gen_range(-6i64..=6), rng.gen_range(-6i64..=6)]);
            let fast = solve_torus_congruence(&m, &b, n).unwrap();
            assert_eq!(fast, brute_congruence(&m, &b, n), "M={:?} b={} n={}", m, b, n);
        }
    }

    #[test]
    fn hit_constant_offsets() {
        // rank-deficient C with an integer-reachable offset
        let c = IntMatrix::from_i64(&[&[1, 0], &[0, 0]]).to_rat();
        let w = RatVector::from_i64(&[0, 0]);
        match affine_lattice_hit(&c, &w) {
            LatticeHit::Witness { t, z } => {
                assert_eq!(t, RatVector::from_i64(&[0, 0]));
                assert_eq!(z, big(&[0, 0]));
            }
            LatticeHit::Empty => panic!("expected a witness"),
        }
    }

    #[test]
    fn hit_diagonal_plane() {
        let c = IntMatrix::from_i64(&[&[1, 1], &[1, 1]]).to_rat();
        let w = RatVector::from_ratios(&[(1, 2), (1, 2)]);
        match affine_lattice_hit(&c, &w) {
            LatticeHit::Witness { t, z } => {
                let reached = c.mul_vec(&t).add(&w);
                assert!(reached.is_integral());
                let ints: Vec<BigInt> = reached.iter().map(|x| x.to_integer()).collect();
                assert_eq!(ints, z);
            }
            LatticeHit::Empty => panic!("expected a witness"),
        }
    }

    #[test]
    fn miss_parallel_line() {
        // image is the line (s, s); offset shifts it off every lattice point
        let c = IntMatrix::from_i64(&[&[1, 0], &[1, 0]]).to_rat();
        let w = RatVector::from_ratios(&[(-1, 4), (0, 1)]);
        assert_eq!(affine_lattice_hit(&c, &w), LatticeHit::Empty);
    }

    #[test]
    fn miss_all_lift_pairs_of_disjoint_pieces() {
        // difference data of the two torus pieces with matrices A, B and
        // shift (1/4, 0): all four lift pairs stay off the integer lattice
        let c = IntMatrix::from_i64(&[&[1, 0], &[1, 0]]).to_rat();
        for w in [
            RatVector::from_ratios(&[(-1, 4), (0, 1)]),
            RatVector::from_ratios(&[(-3, 4), (-1, 2)]),
            RatVector::from_ratios(&[(1, 4), (1, 2)]),
        ] {
            assert_eq!(affine_lattice_hit(&c, &w), LatticeHit::Empty);
        }
    }

    #[test]
    fn hit_full_rank_always() {
        let c = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]).to_rat();
        let w = RatVector::from_ratios(&[(1, 3), (5, 7)]);
        match affine_lattice_hit(&c, &w) {
            LatticeHit::Witness { t, z } => {
                let reached = c.mul_vec(&t).add(&w);
                let ints: Vec<BigInt> = reached.iter().map(|x| x.to_integer()).collect();
                assert!(reached.is_integral());
                assert_eq!(ints, z);
            }
            LatticeHit::Empty => panic!("full-rank image meets the lattice"),
        }
    }

    #[test]
    fn empty_claims_survive_grid_search() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut empties = 0;
        for _ in 0..200 {
            let c = RatMatrix::new(
                2,
                2,
                (0..4)
                    .map(|_| {
                        BigRational::new(
                            BigInt::from(rng.gen_range(-3i64..=3)),
                            BigInt::from(rng.gen_range(1i64..=3)),
                        )
                    })
                    .collect(),
            );
            let w = RatVector::from_ratios(&[
                (rng.gen_range(-8i64..=8), rng.gen_range(1i64..=8)),
                (rng.gen_range(-8i64..=8), rng.gen_range(1i64..=8)),
            ]);
            match affine_lattice_hit(&c, &w) {
                LatticeHit::Witness { t, z } => {
                    let reached = c.mul_vec(&t).add(&w);
                    assert!(reached.is_integral());
                    assert_eq!(
                        reached.iter().map(|x| x.to_integer()).collect::<Vec<_>>(),
                        z
                    );
                }
                LatticeHit::Empty => {
                    empties += 1;
                    for num1 in 0..12i64 {
                        for num2 in 0..12i64 {
                            let t = RatVector::from_ratios(&[(num1, 12), (num2, 12)]);
                            assert!(
                                !c.mul_vec(&t).add(&w).is_integral(),
                                "grid point {} contradicts Empty",
                                t
                            );
                        }
                    }
                }
            }
        }
        assert!(empties > 0, "corpus never exercised the Empty branch");
    }
}
