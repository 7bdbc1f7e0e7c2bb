//! Direct evaluation of `φ_k` from the chain matrices, independent of the
//! coefficient expansion. Used as the oracle for it.

use super::alpha::radial_exponent;
use crate::error::{BandError, Result};
use crate::linalg::SymMatrix;

/// `φ_k(s S_k)` from its defining Frobenius norms:
///
/// ```text
/// (M/4)‖s D_k + λ + C_{k−1}‖² + (M/4)‖D_{k+1} + λ + s⁻¹ C_k‖² − a7 log(s S_k)
/// ```
///
/// with `C_j = B_jᵀ D_j⁻¹ B_j` and `S_k = ‖D_k‖`.
pub fn phi_direct(
    s: f64,
    d_k: &SymMatrix,
    d_next: &SymMatrix,
    prev_coupling: &SymMatrix,
    coupling: &SymMatrix,
    lambda: f64,
) -> Result<f64> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(BandError::Domain(format!(
            "s must be positive and finite, got {s}"
        )));
    }
    let m = d_k.dim();
    let c = m as f64 / 4.0;
    let first = d_k.scaled(s).add(prev_coupling).shifted(-lambda);
    let second = d_next.add(&coupling.scaled(1.0 / s)).shifted(-lambda);
    Ok(
        c * first.frobenius_norm_sq() + c * second.frobenius_norm_sq()
            - radial_exponent(m) * (s * d_k.operator_norm()).ln(),
    )
}
