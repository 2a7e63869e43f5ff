//! Finite-cover representation of an n-valued map.
//!
//! Every irreducible piece (m, A, u) is the shadow of a single-valued
//! affine map: let Λ = {w in Z^q : l·w ≡ 0 (mod m)}, an index-m
//! sublattice, and let p : R^q/Λ → R^q/Z^q be the m-sheeted covering.
//! Then F(x) = (A/m)·x + u descends to a map R^q/Λ → R^q/Z^q, and the
//! piece's value set at t is exactly F(p⁻¹(t)). Fixed points of the piece
//! are coincidences of p and F, which ties the Nielsen number to
//! |det(M - B·M)| for any column basis M of Λ.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::exactlin::{hermite_columns, integer_kernel, IntMatrix, RatMatrix, RatVector};
use crate::monodromy::irreducible_partition;
use crate::nvmaps::CompositeMap;

/// One single-valued cover map: the sublattice Λ (columns of `sublattice`,
/// in Hermite form), the linearization B = A/m, and the translation u.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverComponent {
    sublattice: IntMatrix,
    linearization: RatMatrix,
    translation: RatVector,
    sheets: usize,
}

impl CoverComponent {
    pub fn sublattice(&self) -> &IntMatrix {
        &self.sublattice
    }

    pub fn linearization(&self) -> &RatMatrix {
        &self.linearization
    }

    pub fn translation(&self) -> &RatVector {
        &self.translation
    }

    /// Covering degree of this component, [Z^q : Λ] = m.
    pub fn sheets(&self) -> usize {
        self.sheets
    }

    /// Integer coset representatives of Z^q/Λ: the box cut out by the
    /// Hermite diagonal. Exactly `sheets` vectors.
    fn fiber_offsets(&self) -> Vec<Vec<BigInt>> {
        let q = self.sublattice.rows();
        let radix: Vec<usize> = (0..q)
            .map(|i| self.sublattice[(i, i)].to_usize().unwrap())
            .collect();
        let mut offsets = Vec::with_capacity(self.sheets);
        let mut digits = vec![0usize; q];
        loop {
            offsets.push(digits.iter().map(|&d| BigInt::from(d as u64)).collect());
            let mut pos = 0;
            loop {
                if pos == q {
                    debug_assert_eq!(offsets.len(), self.sheets);
                    return offsets;
                }
                digits[pos] += 1;
                if digits[pos] < radix[pos] {
                    break;
                }
                digits[pos] = 0;
                pos += 1;
            }
        }
    }

    /// The component's values at the torus point t: F over the fiber
    /// p⁻¹(t), each reduced into [0,1)^q.
    pub fn values_at(&self, t: &RatVector) -> Vec<RatVector> {
        self.fiber_offsets()
            .into_iter()
            .map(|a| {
                let lifted = RatVector::new(
                    t.iter()
                        .zip(&a)
                        .map(|(x, ai)| x + BigRational::from(ai.clone()))
                        .collect(),
                );
                self.linearization
                    .mul_vec(&lifted)
                    .add(&self.translation)
                    .reduce_mod1()
            })
            .collect()
    }
}

/// The full representation: one cover component per irreducible piece,
/// stored alongside the partition they came from (same order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteValuedRep {
    partition: CompositeMap,
    components: Vec<CoverComponent>,
}

impl FiniteValuedRep {
    pub fn q(&self) -> usize {
        self.partition.q()
    }

    pub fn n(&self) -> usize {
        self.partition.n()
    }

    pub fn partition(&self) -> &CompositeMap {
        &self.partition
    }

    pub fn components(&self) -> &[CoverComponent] {
        &self.components
    }
}

/// Build the cover representation of a map, refining it to its
/// irreducible partition first.
pub fn to_finite_valued(map: &CompositeMap) -> FiniteValuedRep {
    let partition = irreducible_partition(map);
    let q = partition.q();
    let mut components = Vec::with_capacity(partition.pieces().len());
    for piece in partition.pieces() {
        let m = piece.multiplicity();
        // Λ is the projection of ker [l | -m] ⊂ Z^(q+1) onto the first q
        // coordinates; the projection is injective because the last
        // coordinate is determined by the others.
        let mut constraint = IntMatrix::zeros(1, q + 1);
        for (j, &l) in piece.residues().iter().enumerate() {
            constraint[(0, j)] = BigInt::from(l as u64);
        }
        constraint[(0, q)] = -BigInt::from(m as u64);
        let kernel = integer_kernel(&constraint);
        assert_eq!(kernel.cols(), q, "constraint row must have rank one");
        let mut projected = IntMatrix::zeros(q, q);
        for i in 0..q {
            for j in 0..q {
                projected[(i, j)] = kernel[(i, j)].clone();
            }
        }
        let sublattice = hermite_columns(&projected);
        assert_eq!(
            sublattice.det().abs(),
            BigInt::from(m as u64),
            "sublattice index must equal the multiplicity"
        );
        let inv_m = BigRational::new(BigInt::from(1), BigInt::from(m as u64));
        let linearization = piece.matrix().to_rat().scale(&inv_m);
        assert!(
            linearization.mul_int(&sublattice).is_integral(),
            "linearization must carry the sublattice into Z^q"
        );
        components.push(CoverComponent {
            sublattice,
            linearization,
            translation: piece.shift().clone(),
            sheets: m,
        });
    }
    FiniteValuedRep {
        partition,
        components,
    }
}

/// Fixed point count of the representation: the coincidences of p and F
/// summed over components, each |det(M - B·M)|. Equals the Nielsen number
/// of the underlying map when every component is nondegenerate.
pub fn nielsen_crabb(rep: &FiniteValuedRep) -> BigInt {
    rep.components()
        .iter()
        .map(|comp| {
            let bm = comp
                .linearization
                .mul_int(&comp.sublattice)
                .to_int()
                .expect("construction guarantees B·M integral");
            comp.sublattice.sub(&bm).det().abs()
        })
        .sum()
}

/// Verify that the representation reproduces the map at one point: the
/// values F(p⁻¹(t)) over all components, sorted, must equal the map's
/// value set at t.
pub fn fiber_check(rep: &FiniteValuedRep, map: &CompositeMap, t: &RatVector) -> bool {
    if rep.q() != map.q() || t.len() != map.q() {
        return false;
    }
    let mut actual: Vec<RatVector> = rep
        .components()
        .iter()
        .flat_map(|comp| comp.values_at(t))
        .collect();
    actual.sort();
    actual == map.evaluate(t)
}
