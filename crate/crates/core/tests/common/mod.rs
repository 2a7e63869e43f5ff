//! Shared corpus builders and brute-force oracles for the integration
//! tests.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use nval_core::exactlin::{IntMatrix, RatVector};
use nval_core::nielsen::nielsen_linear;
use nval_core::nvmaps::{CompositeMap, LinearPiece};

/// Random piece with rows congruent mod m by construction: the first row
/// is uniform in [-9,9]^q, later rows pick uniformly among the in-range
/// entries congruent to it.
pub fn random_valid_piece(
    rng: &mut ChaCha8Rng,
    q: usize,
    m: usize,
    shift_denominator_bound: i64,
) -> LinearPiece {
    let mi = m as i64;
    let first: Vec<i64> = (0..q).map(|_| rng.gen_range(-9..=9)).collect();
    let mut rows = vec![first.clone()];
    for _ in 1..q {
        let row = first
            .iter()
            .map(|&e| {
                let candidates: Vec<i64> =
                    (-9..=9).filter(|v| (v - e).rem_euclid(mi) == 0).collect();
                candidates[rng.gen_range(0..candidates.len())]
            })
            .collect();
        rows.push(row);
    }
    let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
    let shift = random_point(rng, q, shift_denominator_bound);
    LinearPiece::new(m, IntMatrix::from_i64(&refs), shift)
        .expect("construction satisfies row congruence")
}

/// Random piece as above, retried until det(mI - A) is nonzero.
pub fn random_nondegenerate_piece(
    rng: &mut ChaCha8Rng,
    q: usize,
    m: usize,
    shift_denominator_bound: i64,
) -> LinearPiece {
    loop {
        let piece = random_valid_piece(rng, q, m, shift_denominator_bound);
        if !nielsen_linear(&piece).is_zero() {
            return piece;
        }
    }
}

/// Random rational point with per-coordinate denominator ≤ bound.
pub fn random_point(rng: &mut ChaCha8Rng, q: usize, denominator_bound: i64) -> RatVector {
    RatVector::new(
        (0..q)
            .map(|_| {
                let den = rng.gen_range(1..=denominator_bound);
                let num = rng.gen_range(0..den);
                BigRational::new(BigInt::from(num), BigInt::from(den))
            })
            .collect(),
    )
}

/// A guaranteed-disjoint companion: same multiplicity and matrix, shifted
/// by 1/(2m+1) in every coordinate. Any lift-pair difference is a multiple
/// of 1/m plus that offset, and since 2m+1 is coprime to m the sum can
/// never be an integer.
pub fn disjoint_companion(piece: &LinearPiece) -> LinearPiece {
    let m = piece.multiplicity();
    let offset = BigRational::new(BigInt::from(1), BigInt::from(2 * m as u64 + 1));
    let shift = RatVector::new(piece.shift().iter().map(|u| u + &offset).collect());
    LinearPiece::new(m, piece.matrix().clone(), shift).expect("same matrix stays valid")
}

/// All rational points of [0,1)^q whose coordinates have denominator at
/// most max_denominator, in odometer order.
pub fn rational_grid(q: usize, max_denominator: i64) -> Vec<RatVector> {
    let mut axis: Vec<BigRational> = Vec::new();
    for den in 1..=max_denominator {
        for num in 0..den {
            let value = BigRational::new(BigInt::from(num), BigInt::from(den));
            if !axis.contains(&value) {
                axis.push(value);
            }
        }
    }
    let mut points = Vec::new();
    let mut digits = vec![0usize; q];
    loop {
        points.push(RatVector::new(
            digits.iter().map(|&d| axis[d].clone()).collect(),
        ));
        let mut pos = 0;
        loop {
            if pos == q {
                return points;
            }
            digits[pos] += 1;
            if digits[pos] < axis.len() {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

/// Whether two pieces share any value at any point of the grid.
pub fn grid_collision(a: &LinearPiece, b: &LinearPiece, grid: &[RatVector]) -> bool {
    grid.iter().any(|t| {
        let values_a: Vec<RatVector> = (1..=a.multiplicity())
            .map(|k| a.branch_value(t, k))
            .collect();
        (1..=b.multiplicity()).any(|k| values_a.contains(&b.branch_value(t, k)))
    })
}

fn piece(m: usize, a: &[&[i64]], shift: &[(i64, i64)]) -> LinearPiece {
    LinearPiece::new(m, IntMatrix::from_i64(a), RatVector::from_ratios(shift)).unwrap()
}

fn map(pieces: Vec<LinearPiece>) -> CompositeMap {
    CompositeMap::new(pieces).unwrap()
}

/// The two-piece map used as the running example everywhere: an A-piece
/// and a shifted B-piece on the 2-torus, n = 4.
pub fn reference_composite() -> CompositeMap {
    map(vec![
        piece(2, &[&[1, 0], &[3, 4]], &[(0, 1), (0, 1)]),
        piece(2, &[&[-1, 0], &[1, 4]], &[(1, 4), (0, 1)]),
    ])
}

/// Hand-picked maps with q ≤ 2, n ≤ 6, and value fibers well enough
/// separated that default-margin tracking at M = 512 stays sound.
pub fn tracker_corpus() -> Vec<CompositeMap> {
    vec![
        // circle, single piece
        map(vec![piece(4, &[&[2]], &[(0, 1)])]),
        map(vec![piece(2, &[&[1]], &[(0, 1)])]),
        map(vec![piece(2, &[&[3]], &[(0, 1)])]),
        map(vec![piece(3, &[&[5]], &[(0, 1)])]),
        map(vec![piece(6, &[&[4]], &[(1, 3)])]),
        map(vec![piece(1, &[&[-2]], &[(0, 1)])]),
        map(vec![piece(5, &[&[3]], &[(1, 5)])]),
        map(vec![piece(2, &[&[2]], &[(1, 4)])]),
        map(vec![piece(4, &[&[8]], &[(0, 1)])]),
        map(vec![piece(3, &[&[0]], &[(1, 7)])]),
        map(vec![piece(6, &[&[2]], &[(0, 1)])]),
        map(vec![piece(5, &[&[7]], &[(2, 5)])]),
        // circle, composite
        map(vec![
            piece(2, &[&[1]], &[(0, 1)]),
            piece(2, &[&[1]], &[(1, 4)]),
        ]),
        map(vec![
            piece(1, &[&[2]], &[(0, 1)]),
            piece(1, &[&[2]], &[(1, 3)]),
        ]),
        map(vec![
            piece(2, &[&[1]], &[(1, 8)]),
            piece(4, &[&[2]], &[(0, 1)]),
        ]),
        // torus, single piece
        map(vec![piece(2, &[&[1, 0], &[3, 4]], &[(0, 1), (0, 1)])]),
        map(vec![piece(2, &[&[-1, 0], &[1, 4]], &[(0, 1), (0, 1)])]),
        map(vec![piece(1, &[&[2, 0], &[0, 3]], &[(0, 1), (0, 1)])]),
        map(vec![piece(1, &[&[0, -1], &[1, 0]], &[(1, 5), (0, 1)])]),
        map(vec![piece(3, &[&[1, 1], &[1, 1]], &[(0, 1), (0, 1)])]),
        map(vec![piece(4, &[&[2, 0], &[2, 4]], &[(0, 1), (0, 1)])]),
        map(vec![piece(2, &[&[1, 1], &[3, 3]], &[(1, 3), (1, 6)])]),
        // torus, composite
        reference_composite(),
        map(vec![
            piece(1, &[&[1, 0], &[0, 1]], &[(1, 3), (0, 1)]),
            piece(1, &[&[1, 0], &[0, 1]], &[(0, 1), (1, 2)]),
        ]),
    ]
}
