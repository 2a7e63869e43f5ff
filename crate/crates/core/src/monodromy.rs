//! Branch monodromy of n-valued maps.
//!
//! Dragging the n values of a composite map around the j-th coordinate
//! loop permutes them; for a piece with residue vector l the loop sends
//! lift k to k + l_j (mod m), acting inside each piece's block of lift
//! indices. The orbits of the group generated by these q permutations cut
//! the map into its irreducible pieces: a piece with g = gcd(m, l_1, …,
//! l_q) splits into g pieces of multiplicity m/g, and no further.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use std::fmt;

use crate::error::Error;
use crate::exactlin::RatVector;
use crate::nvmaps::{CompositeMap, LinearPiece};

/// A permutation of {0,…,n-1}, stored as the image table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, Error> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::InvalidPermutation);
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// self ∘ other: first other, then self.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Permutation {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Nontrivial cycles, each starting at its least element, ordered by
    /// that element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut cycles = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut next = self.images[start];
            while next != start {
                seen[next] = true;
                cycle.push(next);
                next = self.images[next];
            }
            if cycle.len() > 1 {
                cycles.push(cycle);
            }
        }
        cycles
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation with 1-based labels, e.g. "(1 3)(2 4)"; "id" when
    /// there is nothing to write.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "id");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for (pos, i) in cycle.iter().enumerate() {
                if pos > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", i + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Orbits of {0,…,n-1} under a set of permutations, as sorted blocks
/// ordered by least element.
pub fn orbit_partition(n: usize, perms: &[Permutation]) -> Vec<Vec<usize>> {
    for p in perms {
        assert_eq!(p.degree(), n, "permutation degree mismatch");
    }
    let inverses: Vec<Permutation> = perms.iter().map(Permutation::inverse).collect();
    let mut seen = vec![false; n];
    let mut blocks = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut block = Vec::new();
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(i) = stack.pop() {
            block.push(i);
            for p in perms.iter().chain(&inverses) {
                let j = p.apply(i);
                if !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        block.sort_unstable();
        blocks.push(block);
    }
    blocks
}

/// The q loop permutations of a map together with their orbit structure.
/// Lift indices are global and 0-based: piece blocks in order, k-1 within
/// each block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonodromyData {
    generators: Vec<Permutation>,
    orbits: Vec<Vec<usize>>,
    index_to_piece: Vec<usize>,
}

impl MonodromyData {
    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn orbit_partition(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    /// Which piece (0-based) each global lift index belongs to.
    pub fn index_to_piece(&self) -> &[usize] {
        &self.index_to_piece
    }
}

/// Compute the q monodromy permutations of a composite map exactly from
/// the residue vectors of its pieces.
pub fn sigma_generators(map: &CompositeMap) -> MonodromyData {
    let n = map.n();
    let q = map.q();
    let mut index_to_piece = Vec::with_capacity(n);
    for (i, piece) in map.pieces().iter().enumerate() {
        index_to_piece.extend(std::iter::repeat(i).take(piece.multiplicity()));
    }
    let mut generators = Vec::with_capacity(q);
    for j in 0..q {
        let mut images = Vec::with_capacity(n);
        let mut offset = 0;
        for piece in map.pieces() {
            let m = piece.multiplicity();
            let l = piece.residues()[j];
            for idx in 0..m {
                images.push(offset + (idx + l) % m);
            }
            offset += m;
        }
        generators.push(Permutation::from_images(images).unwrap());
    }
    let orbits = orbit_partition(n, &generators);
    MonodromyData {
        generators,
        orbits,
        index_to_piece,
    }
}

/// Orbits of the branch monodromy, sorted blocks of global lift indices.
pub fn orbits(map: &CompositeMap) -> Vec<Vec<usize>> {
    sigma_generators(map).orbits
}

/// gcd(m, l_1, …, l_q) for one piece: the number of irreducible pieces it
/// splits into.
fn splitting_degree(piece: &LinearPiece) -> usize {
    piece
        .residues()
        .iter()
        .fold(piece.multiplicity(), |g, &l| g.gcd(&l))
}

/// Refine every piece into its monodromy-irreducible parts. A piece with
/// g = gcd(m, l) > 1 becomes the g pieces (m/g, A/g, u + (r/m)·c) for
/// r = 0..g-1; the value set at every point is unchanged.
pub fn irreducible_partition(map: &CompositeMap) -> CompositeMap {
    let mut pieces = Vec::new();
    for piece in map.pieces() {
        let g = splitting_degree(piece);
        if g == 1 {
            pieces.push(piece.clone());
            continue;
        }
        let m = piece.multiplicity();
        let a = piece.matrix().div_exact(&BigInt::from(g as u64));
        for r in 0..g {
            let step = BigRational::new(BigInt::from(r as u64), BigInt::from(m as u64));
            let shift = RatVector::new(piece.shift().iter().map(|u| u + &step).collect());
            pieces.push(
                LinearPiece::new(m / g, a.clone(), shift)
                    .expect("refined piece inherits validity"),
            );
        }
    }
    CompositeMap::new(pieces).expect("refinement preserves disjointness")
}

/// True when every monodromy orbit is a single lift, i.e. the map is a
/// union of n single-valued maps.
pub fn is_split(map: &CompositeMap) -> bool {
    map.pieces().iter().all(|p| splitting_degree(p) == p.multiplicity())
}
