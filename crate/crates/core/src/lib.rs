//! Numerical laboratory for block-tridiagonal Gaussian band matrices.
//!
//! The crate samples the block model, runs the Schur-complement transfer
//! recursion for the corner block of the resolvent, evaluates the exact
//! conditional density of the scalar `S_k = ‖D_k‖`, and drives the Monte
//! Carlo experiments that check the resulting estimates.

pub mod chain;
pub mod density;
pub mod error;
pub mod experiments;
pub mod io;
pub mod linalg;
pub mod rng;
pub mod special;
pub mod stats;

pub use error::{BandError, Result};
