//! Linear pieces and composite n-valued self-maps of the q-torus.
//!
//! A piece (m, A, u) sends the torus point t to the m values
//! (A·t + k·c)/m + u for k = 1..m, where c = (1,…,1). This is well defined
//! on the torus exactly when all rows of A are congruent modulo m; the
//! common residue vector l drives everything downstream (monodromy, the
//! irreducible partition, covers). A composite map is a disjoint union of
//! pieces whose value sets never overlap.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::Error;
use crate::exactlin::{affine_lattice_hit, IntMatrix, LatticeHit, RatVector};

/// One m-valued linear piece. The shift is stored reduced into [0,1)^q and
/// the residue vector l (rows of A mod m) is computed at construction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct LinearPiece {
    m: usize,
    a: IntMatrix,
    shift: RatVector,
    residues: Vec<usize>,
}

impl LinearPiece {
    /// Validate and build a piece. Fails with `RowCongruenceViolation` on
    /// the first row pair (1-based, with the offending column) whose
    /// entries disagree modulo m.
    pub fn new(m: usize, a: IntMatrix, shift: RatVector) -> Result<Self, Error> {
        if m == 0 {
            return Err(Error::ZeroMultiplicity);
        }
        if !a.is_square() {
            return Err(Error::NonSquare {
                rows: a.rows(),
                cols: a.cols(),
            });
        }
        let q = a.rows();
        if q == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        if shift.len() != q {
            return Err(Error::DimensionMismatch {
                expected: q,
                found: shift.len(),
            });
        }
        let mb = BigInt::from(m as u64);
        for i in 0..q {
            for j in i + 1..q {
                for col in 0..q {
                    if !((&a[(i, col)] - &a[(j, col)]) % &mb).is_zero() {
                        return Err(Error::RowCongruenceViolation {
                            row_a: i + 1,
                            row_b: j + 1,
                            col: col + 1,
                        });
                    }
                }
            }
        }
        let residues = (0..q)
            .map(|col| a[(0, col)].mod_floor(&mb).to_usize().unwrap())
            .collect();
        Ok(LinearPiece {
            m,
            a,
            shift: shift.reduce_mod1(),
            residues,
        })
    }

    pub fn q(&self) -> usize {
        self.a.rows()
    }

    pub fn multiplicity(&self) -> usize {
        self.m
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.a
    }

    pub fn shift(&self) -> &RatVector {
        &self.shift
    }

    /// Common residues of the rows of A modulo m, each in {0,…,m-1}.
    pub fn residues(&self) -> &[usize] {
        &self.residues
    }

    /// Value of lift k (1-based, k = 1..m) at t, reduced into [0,1)^q.
    pub fn branch_value(&self, t: &RatVector, k: usize) -> RatVector {
        self.branch_raw(t, k).reduce_mod1()
    }

    /// Same as `branch_value` but without the final torus reduction.
    fn branch_raw(&self, t: &RatVector, k: usize) -> RatVector {
        assert!(1 <= k && k <= self.m, "lift index out of range");
        let inv_m = BigRational::new(BigInt::from(1), BigInt::from(self.m as u64));
        let kk = BigRational::new(BigInt::from(k as u64), BigInt::from(self.m as u64));
        let at = self.a.to_rat().mul_vec(t).scale(&inv_m);
        let coords = at
            .iter()
            .zip(self.shift.iter())
            .map(|(x, u)| x + &kk + u)
            .collect();
        RatVector::new(coords)
    }

    /// Move a lift index to a different torus representative: shifting the
    /// argument by an integer vector z relabels lift k as k + l·z (mod m).
    fn relabel_lift(&self, k: usize, z: &[BigInt]) -> usize {
        let mb = BigInt::from(self.m as u64);
        let mut lz = BigInt::from(k as u64 - 1);
        for (l, zi) in self.residues.iter().zip(z) {
            lz += BigInt::from(*l as u64) * zi;
        }
        lz.mod_floor(&mb).to_usize().unwrap() + 1
    }
}

/// Outcome of the value-overlap test for a pair of pieces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Disjointness {
    Disjoint,
    Collision {
        point: RatVector,
        lift_a: usize,
        lift_b: usize,
    },
}

/// Decide whether two pieces on the same torus ever share a value. Checks
/// every lift pair exactly; a collision comes with a torus point witness
/// and the colliding lift indices (1-based).
pub fn pairwise_disjoint(p: &LinearPiece, r: &LinearPiece) -> Result<Disjointness, Error> {
    if p.q() != r.q() {
        return Err(Error::DimensionMismatch {
            expected: p.q(),
            found: r.q(),
        });
    }
    let inv_mp = BigRational::new(BigInt::from(1), BigInt::from(p.m as u64));
    let inv_mr = BigRational::new(BigInt::from(1), BigInt::from(r.m as u64));
    let c = p
        .a
        .to_rat()
        .scale(&inv_mp)
        .sub(&r.a.to_rat().scale(&inv_mr));
    for k1 in 1..=p.m {
        for k2 in 1..=r.m {
            let kshift = BigRational::new(BigInt::from(k1 as u64), BigInt::from(p.m as u64))
                - BigRational::new(BigInt::from(k2 as u64), BigInt::from(r.m as u64));
            let w = RatVector::new(
                p.shift
                    .iter()
                    .zip(r.shift.iter())
                    .map(|(up, ur)| up - ur + &kshift)
                    .collect(),
            );
            if let LatticeHit::Witness { t, .. } = affine_lattice_hit(&c, &w) {
                let z = t.floor_parts();
                let point = t.reduce_mod1();
                let lift_a = p.relabel_lift(k1, &z);
                let lift_b = r.relabel_lift(k2, &z);
                debug_assert!(
                    p.branch_raw(&point, lift_a)
                        .sub(&r.branch_raw(&point, lift_b))
                        .is_integral(),
                    "collision witness does not verify"
                );
                return Ok(Disjointness::Collision {
                    point,
                    lift_a,
                    lift_b,
                });
            }
        }
    }
    Ok(Disjointness::Disjoint)
}

/// A validated n-valued map: pieces on a common torus with pairwise
/// disjoint value sets. n is the sum of the multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeMap {
    q: usize,
    n: usize,
    pieces: Vec<LinearPiece>,
}

impl CompositeMap {
    pub fn new(pieces: Vec<LinearPiece>) -> Result<Self, Error> {
        let q = match pieces.first() {
            None => return Err(Error::EmptyComposite),
            Some(p) => p.q(),
        };
        for p in &pieces {
            if p.q() != q {
                return Err(Error::DimensionMismatch {
                    expected: q,
                    found: p.q(),
                });
            }
        }
        for i in 0..pieces.len() {
            for j in i + 1..pieces.len() {
                match pairwise_disjoint(&pieces[i], &pieces[j])? {
                    Disjointness::Disjoint => {}
                    Disjointness::Collision {
                        point,
                        lift_a,
                        lift_b,
                    } => {
                        return Err(Error::CollisionBetweenPieces {
                            piece_a: i + 1,
                            piece_b: j + 1,
                            point,
                            lift_a,
                            lift_b,
                        });
                    }
                }
            }
        }
        let n = pieces.iter().map(|p| p.m).sum();
        Ok(CompositeMap { q, n, pieces })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pieces(&self) -> &[LinearPiece] {
        &self.pieces
    }

    /// All n values at t in lift order: piece by piece, k = 1..m. Each
    /// value is reduced into [0,1)^q.
    pub fn evaluate_lifts(&self, t: &RatVector) -> Vec<RatVector> {
        assert_eq!(t.len(), self.q, "point has wrong dimension");
        let mut out = Vec::with_capacity(self.n);
        for p in &self.pieces {
            for k in 1..=p.m {
                out.push(p.branch_value(t, k));
            }
        }
        out
    }

    /// The value set at t, sorted lexicographically. Always n distinct
    /// points; fewer would mean validation let a collision through.
    pub fn evaluate(&self, t: &RatVector) -> Vec<RatVector> {
        let mut values = self.evaluate_lifts(t);
        values.sort();
        for pair in values.windows(2) {
            assert!(
                pair[0] != pair[1],
                "internal inconsistency: duplicate value {} at {}",
                pair[0],
                t
            );
        }
        values
    }
}
