//! Exact computations for n-valued linear self-maps of tori.
//!
//! An n-valued map assigns to every point of the q-torus an unordered set
//! of n image points. The linear ones are finite unions of pieces, each
//! given by an integer matrix A, a multiplicity m, and a rational shift u:
//! the piece sends t to the m points (A·t + k·c)/m + u for k = 1..m, with
//! c the all-ones vector. This crate validates such maps, splits them into
//! irreducible pieces, counts fixed points the Nielsen way, enumerates the
//! fixed points exactly, converts to single-valued maps on finite covers,
//! and cross-checks the algebra with a floating-point fiber tracker.

pub mod crabb;
pub mod error;
pub mod exactlin;
pub mod monodromy;
pub mod nielsen;
pub mod nvmaps;
pub mod tracker;

pub use error::Error;
