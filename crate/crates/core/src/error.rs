//! Error type shared by all modules.
//!
//! Indices in error variants are 1-based (matrix rows, columns, piece
//! numbers, lift indices), matching how the quantities are written by
//! hand. Data structures elsewhere index from 0.

use thiserror::Error;

use crate::exactlin::RatVector;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is {rows}x{cols}, expected square")]
    NonSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is singular")]
    DegenerateMatrix,

    #[error("rows {row_a} and {row_b} differ at column {col} modulo m")]
    RowCongruenceViolation {
        row_a: usize,
        row_b: usize,
        col: usize,
    },

    #[error("multiplicity must be at least 1")]
    ZeroMultiplicity,

    #[error("composite map needs at least one piece")]
    EmptyComposite,

    #[error(
        "pieces {piece_a} and {piece_b} collide at {point} (lifts {lift_a}, {lift_b})"
    )]
    CollisionBetweenPieces {
        piece_a: usize,
        piece_b: usize,
        point: RatVector,
        lift_a: usize,
        lift_b: usize,
    },

    #[error("piece {piece} has det(mI - A) = 0, fixed points are not isolated")]
    DegeneratePiece { piece: usize },

    #[error("not a permutation: images are not a bijection")]
    InvalidPermutation,

    #[error(
        "tracking step {step}: matching cost {cost:.3e} exceeds margin {limit:.3e}, \
         increase samples_per_loop"
    )]
    ResolutionTooCoarse { step: usize, cost: f64, limit: f64 },

    #[error("sampler returned {found} fiber points, expected {expected}")]
    FiberCardinality { expected: usize, found: usize },
}
