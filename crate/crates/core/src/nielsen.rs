//! Nielsen numbers and exact fixed-point enumeration.
//!
//! For one piece the Nielsen number is |det(mI - A)| / m^(q-1), an
//! integer whenever mI - A is nonsingular (and 0 otherwise). For a
//! composite map it is the sum over the irreducible partition. Fixed
//! points of lift k solve (mI - A)·t ≡ k·c + m·u modulo m·Z^q; every
//! fixed point of a nondegenerate piece carries index sign(det(mI - A)).

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use num_rational::BigRational;

use crate::error::Error;
use crate::exactlin::{sign_of, solve_torus_congruence, IntMatrix, RatVector};
use crate::monodromy::irreducible_partition;
use crate::nvmaps::{CompositeMap, LinearPiece};

/// mI - A, the fixed-point displacement matrix of a piece.
fn displacement(piece: &LinearPiece) -> IntMatrix {
    IntMatrix::identity(piece.q())
        .scale(&BigInt::from(piece.multiplicity() as u64))
        .sub(piece.matrix())
}

/// Nielsen number of a single piece: |det(mI - A)| / m^(q-1), or 0 for a
/// degenerate piece. The division is always exact; this is asserted.
pub fn nielsen_linear(piece: &LinearPiece) -> BigInt {
    let det = displacement(piece).det();
    if det.is_zero() {
        return BigInt::zero();
    }
    let mq = BigInt::from(piece.multiplicity() as u64).pow((piece.q() - 1) as u32);
    let (quot, rem) = num_integer::Integer::div_rem(&det.abs(), &mq);
    assert!(
        rem.is_zero(),
        "m^(q-1) must divide det(mI - A) for a row-congruent piece"
    );
    quot
}

/// Nielsen data of a composite map, computed on its irreducible partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NielsenReport {
    partition: CompositeMap,
    per_piece: Vec<BigInt>,
    total: BigInt,
    lefschetz: BigInt,
}

impl NielsenReport {
    /// The irreducible partition the numbers refer to.
    pub fn partition(&self) -> &CompositeMap {
        &self.partition
    }

    /// Nielsen number of each irreducible piece, in partition order.
    pub fn per_piece(&self) -> &[BigInt] {
        &self.per_piece
    }

    /// Nielsen number of the map: the sum over irreducible pieces.
    pub fn total(&self) -> &BigInt {
        &self.total
    }

    /// Lefschetz number: the index-weighted fixed point count,
    /// sum of sign(det(mI - A)) · N over irreducible pieces.
    pub fn lefschetz(&self) -> &BigInt {
        &self.lefschetz
    }
}

pub fn nielsen_composite(map: &CompositeMap) -> NielsenReport {
    let partition = irreducible_partition(map);
    let per_piece: Vec<BigInt> = partition.pieces().iter().map(nielsen_linear).collect();
    let total = per_piece.iter().sum();
    let lefschetz = partition
        .pieces()
        .iter()
        .zip(&per_piece)
        .map(|(piece, n)| BigInt::from(sign_of(&displacement(piece).det())) * n)
        .sum();
    NielsenReport {
        partition,
        per_piece,
        total,
        lefschetz,
    }
}

/// One fixed point: the torus point, which piece and lift of the original
/// map produced it (piece 1-based), and its fixed point index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPointRecord {
    pub point: RatVector,
    pub piece: usize,
    pub lift: usize,
    pub index: i8,
}

/// Enumerate all fixed points of the map exactly, sorted by piece then
/// point. Fails with `DegeneratePiece` if any piece has det(mI - A) = 0
/// (infinitely many fixed points, or none, along a subtorus).
pub fn fixed_points(map: &CompositeMap) -> Result<Vec<FixedPointRecord>, Error> {
    let mut records = Vec::new();
    for (i, piece) in map.pieces().iter().enumerate() {
        let disp = displacement(piece);
        let det = disp.det();
        if det.is_zero() {
            return Err(Error::DegeneratePiece { piece: i + 1 });
        }
        let index = sign_of(&det);
        let m = piece.multiplicity();
        let mut count = BigInt::zero();
        for k in 1..=m {
            let b = RatVector::new(
                piece
                    .shift()
                    .iter()
                    .map(|u| BigRational::from(BigInt::from(k as u64)) + u * BigRational::from(BigInt::from(m as u64)))
                    .collect(),
            );
            let solutions = solve_torus_congruence(&disp, &b, m)?;
            count += BigInt::from(solutions.len() as u64);
            for t in solutions {
                debug_assert!(
                    piece.branch_value(&t, k) == t,
                    "fixed point candidate fails verification"
                );
                records.push(FixedPointRecord {
                    point: t,
                    piece: i + 1,
                    lift: k,
                    index,
                });
            }
        }
        debug_assert_eq!(
            count,
            nielsen_linear(piece),
            "per-piece fixed point count must equal |det(mI - A)| / m^(q-1)"
        );
    }
    records.sort_by(|a, b| a.piece.cmp(&b.piece).then_with(|| a.point.cmp(&b.point)));
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn piece(m: usize, a: &[&[i64]], shift: &[(i64, i64)]) -> LinearPiece {
        LinearPiece::new(
            m,
            IntMatrix::from_i64(a),
            RatVector::from_ratios(shift),
        )
        .unwrap()
    }

    fn single(p: LinearPiece) -> CompositeMap {
        CompositeMap::new(vec![p]).unwrap()
    }

    #[test]
    fn circle_nielsen_is_degree_distance() {
        // |m - a| on the circle
        let cases = [(4usize, 2i64, 2u64), (4, 8, 4), (2, 3, 1), (3, 3, 0), (1, 5, 4)];
        for (m, a, expected) in cases {
            let p = piece(m, &[&[a]], &[(0, 1)]);
            assert_eq!(nielsen_linear(&p), BigInt::from(expected));
        }
    }

    #[test]
    fn torus_nielsen_divides_exactly() {
        let g = piece(2, &[&[1, 0], &[3, 4]], &[(0, 1), (0, 1)]);
        // det(2I - A) = det([[1,0],[-3,-2]]) = -2, so N = 2/2 = 1
        assert_eq!(nielsen_linear(&g), BigInt::from(1u8));
        let h = piece(2, &[&[-1, 0], &[1, 4]], &[(1, 4), (0, 1)]);
        // det([[3,0],[-1,-2]]) = -6, N = 3
        assert_eq!(nielsen_linear(&h), BigInt::from(3u8));
    }

    #[test]
    fn composite_nielsen_sums_over_partition() {
        let g = piece(2, &[&[1, 0], &[3, 4]], &[(0, 1), (0, 1)]);
        let h = piece(2, &[&[-1, 0], &[1, 4]], &[(1, 4), (0, 1)]);
        let report = nielsen_composite(&CompositeMap::new(vec![g, h]).unwrap());
        assert_eq!(report.per_piece(), &[BigInt::from(1u8), BigInt::from(3u8)]);
        assert_eq!(report.total(), &BigInt::from(4u8));
        assert_eq!(report.lefschetz(), &BigInt::from(-4i8));
        assert_eq!(report.partition().pieces().len(), 2);
    }

    #[test]
    fn partition_refines_before_counting() {
        // f(t) = (2t + k/4): N = |4 - 2| / 1 = 2, and the two irreducible
        // pieces contribute 1 each
        let report = nielsen_composite(&single(piece(4, &[&[2]], &[(0, 1)])));
        assert_eq!(report.per_piece(), &[BigInt::from(1u8), BigInt::from(1u8)]);
        assert_eq!(report.total(), &BigInt::from(2u8));
        assert_eq!(report.lefschetz(), &BigInt::from(2u8));
    }

    #[test]
    fn degenerate_piece_has_nielsen_zero_and_no_enumeration() {
        let p = piece(2, &[&[2]], &[(1, 3)]);
        assert_eq!(nielsen_linear(&p), BigInt::zero());
        assert_eq!(
            fixed_points(&single(p)),
            Err(Error::DegeneratePiece { piece: 1 })
        );
    }

    #[test]
    fn fixed_points_of_plain_torus_piece() {
        let map = single(piece(2, &[&[1, 0], &[3, 4]], &[(0, 1), (0, 1)]));
        let records = fixed_points(&map).unwrap();
        assert_eq!(
            records,
            vec![FixedPointRecord {
                point: RatVector::from_i64(&[0, 0]),
                piece: 1,
                lift: 2,
                index: -1,
            }]
        );
    }

    #[test]
    fn fixed_points_of_shifted_torus_piece() {
        let map = single(piece(2, &[&[-1, 0], &[1, 4]], &[(1, 4), (0, 1)]));
        let records = fixed_points(&map).unwrap();
        assert_eq!(records.len(), 3);
        let expected = [
            (RatVector::from_ratios(&[(1, 6), (11, 12)]), 2usize),
            (RatVector::from_ratios(&[(1, 2), (1, 4)]), 1),
            (RatVector::from_ratios(&[(5, 6), (7, 12)]), 2),
        ];
        for (record, (point, lift)) in records.iter().zip(&expected) {
            assert_eq!(&record.point, point);
            assert_eq!(&record.lift, lift);
            assert_eq!(record.index, -1);
            assert_eq!(record.piece, 1);
        }
    }

    #[test]
    fn fixed_points_of_even_circle_map() {
        let map = single(piece(4, &[&[2]], &[(0, 1)]));
        let records = fixed_points(&map).unwrap();
        assert_eq!(
            records,
            vec![
                FixedPointRecord {
                    point: RatVector::from_i64(&[0]),
                    piece: 1,
                    lift: 4,
                    index: 1,
                },
                FixedPointRecord {
                    point: RatVector::from_ratios(&[(1, 2)]),
                    piece: 1,
                    lift: 1,
                    index: 1,
                },
            ]
        );
    }

    #[test]
    fn fixed_point_count_matches_nielsen_total() {
        let g = piece(2, &[&[1, 0], &[3, 4]], &[(0, 1), (0, 1)]);
        let h = piece(2, &[&[-1, 0], &[1, 4]], &[(1, 4), (0, 1)]);
        let map = CompositeMap::new(vec![g, h]).unwrap();
        let records = fixed_points(&map).unwrap();
        let report = nielsen_composite(&map);
        assert_eq!(BigInt::from(records.len() as u64), *report.total());
        // every reported point really is fixed
        for record in &records {
            let values = map.evaluate(&record.point);
            assert!(values.contains(&record.point));
        }
    }

    #[test]
    fn translation_changes_points_not_counts() {
        let base = single(piece(2, &[&[-1, 0], &[1, 4]], &[(0, 1), (0, 1)]));
        let records = fixed_points(&base).unwrap();
        let expected = [
            (RatVector::from_i64(&[0, 0]), 2usize),
            (RatVector::from_ratios(&[(1, 3), (1, 3)]), 1),
            (RatVector::from_ratios(&[(2, 3), (2, 3)]), 2),
        ];
        assert_eq!(records.len(), expected.len());
        for (record, (point, lift)) in records.iter().zip(&expected) {
            assert_eq!((&record.point, record.lift), (point, *lift));
            assert_eq!(record.index, -1);
        }
        let moved = single(piece(2, &[&[-1, 0], &[1, 4]], &[(3, 7), (2, 5)]));
        assert_eq!(fixed_points(&moved).unwrap().len(), records.len());
    }
}
