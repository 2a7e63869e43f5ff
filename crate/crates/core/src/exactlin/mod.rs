//! Exact linear algebra over arbitrary-precision integers and rationals.

mod matrix;
mod snf;
mod solve;

pub use matrix::{IntMatrix, RatMatrix, RatVector};
pub use snf::{hermite_columns, integer_kernel, snf, SnfDecomposition};
pub use solve::{affine_lattice_hit, solve_lattice, solve_torus_congruence, LatticeHit};

pub(crate) use matrix::sign_of;
