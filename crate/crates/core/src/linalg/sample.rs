//! Gaussian block samplers.
//!
//! Expanding `(M/4) tr a*a` over a block-tridiagonal symmetric `a` gives
//! the marginal laws used here: a diagonal block `a_kk` contributes
//! `(M/4) Σᵢ a_ii² + (M/2) Σ_{i<j} a_ij²`, so its diagonal entries have
//! variance `2/M` and its off-diagonal entries `1/M`. An off-diagonal block
//! appears twice (as `a_{k,k+1}` and its transpose) and contributes
//! `(M/2) Σ a_ij²`, so all its entries have variance `1/M`.

use rand::Rng;
use rand_distr::StandardNormal;

use super::dense::{Matrix, SymMatrix};

/// `M×M` block of independent `N(0, 1/M)` entries, filled row by row.
pub fn sample_gaussian_block<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Matrix {
    let sd = (1.0 / m as f64).sqrt();
    Matrix::from_fn(m, m, |_, _| sd * rng.sample::<f64, _>(StandardNormal))
}

/// Symmetric Gaussian block with the law of `(E + Eᵀ)/√2`: diagonal
/// variance `2/M`, off-diagonal variance `1/M`. The upper triangle is
/// drawn row by row.
pub fn sample_goe_block<R: Rng + ?Sized>(m: usize, rng: &mut R) -> SymMatrix {
    let off = (1.0 / m as f64).sqrt();
    let diag = (2.0 / m as f64).sqrt();
    SymMatrix::from_upper(m, |i, j| {
        let z: f64 = rng.sample(StandardNormal);
        if i == j {
            diag * z
        } else {
            off * z
        }
    })
}
