//! Conditional law of the scalar `S_k = ‖D_k‖` given the direction
//! `D_k / S_k` and the neighbouring chain variables.
//!
//! The conditional density of `S_k` is `∝ e^{−φ_k(S)}` with
//!
//! ```text
//! φ_k(s S_k) = (M/4) ‖s D_k + λ + B_{k−1}ᵀ D_{k−1}⁻¹ B_{k−1}‖²_F
//!            + (M/4) ‖D_{k+1} + λ + s⁻¹ B_kᵀ D_k⁻¹ B_k‖²_F
//!            − ((M² + M − 2)/2) log(s S_k)
//! ```
//!
//! Writing `P = λ + B_{k−1}ᵀ D_{k−1}⁻¹ B_{k−1}` and `Q = B_kᵀ D_k⁻¹ B_k`,
//! the recursion gives `s D_k + P = s A_{k,k} + (1 − s) P` and
//! `D_{k+1} + λ + s⁻¹ Q = A_{k+1,k+1} + (s⁻¹ − 1) Q`, which expands into
//! seven scalar coefficients.

use crate::error::{BandError, Result};
use crate::linalg::{sym_inverse, trace_product, Matrix, SymMatrix};

use super::quadrature::{log_moments_of, LogMoments};

/// Coefficients of the polynomial-logarithmic expansion of `φ_k(S_k s)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlphaCoefficients {
    /// `(M/4) ‖A_{k,k}‖²_F`
    pub a1: f64,
    /// `(M/4) ‖P‖²_F`
    pub a2: f64,
    /// `(M/4) tr A_{k,k} P`
    pub a3: f64,
    /// `(M/4) ‖A_{k+1,k+1}‖²_F`
    pub a4: f64,
    /// `(M/4) ‖Q‖²_F`
    pub a5: f64,
    /// `(M/4) tr A_{k+1,k+1} Q`
    pub a6: f64,
    /// `(M² + M − 2)/2`, the radial exponent of the `M(M+1)/2`-dimensional
    /// space of symmetric matrices.
    pub a7: f64,
    pub m: usize,
    /// `S_k`
    pub s_k: f64,
}

/// `(M² + M − 2)/2` computed in integers; always exact.
pub fn radial_exponent(m: usize) -> f64 {
    let twice = m * m + m - 2;
    debug_assert_eq!(twice % 2, 0);
    (twice / 2) as f64
}

impl AlphaCoefficients {
    /// Coefficients with explicit `a1..a6`; `a7` is fixed by `m`.
    pub fn from_values(values: [f64; 6], m: usize, s_k: f64) -> Result<Self> {
        if m == 0 {
            return Err(BandError::Domain("block size must be positive".into()));
        }
        if !(s_k > 0.0 && s_k.is_finite()) || values.iter().any(|v| !v.is_finite()) {
            return Err(BandError::Domain(
                "coefficients must be finite with S_k > 0".into(),
            ));
        }
        let [a1, a2, a3, a4, a5, a6] = values;
        if a1 < 0.0 || a2 < 0.0 || a4 < 0.0 || a5 < 0.0 {
            return Err(BandError::Domain(
                "a1, a2, a4, a5 must be nonnegative".into(),
            ));
        }
        Ok(Self {
            a1,
            a2,
            a3,
            a4,
            a5,
            a6,
            a7: radial_exponent(m),
            m,
            s_k,
        })
    }

    /// Builds the coefficients from the blocks and the two couplings
    /// `B_{k−1}ᵀ D_{k−1}⁻¹ B_{k−1}` and `B_kᵀ D_k⁻¹ B_k`.
    pub fn from_couplings(
        akk: &SymMatrix,
        ak1k1: &SymMatrix,
        prev_coupling: &SymMatrix,
        coupling: &SymMatrix,
        s_k: f64,
        lambda: f64,
    ) -> Result<Self> {
        let m = akk.dim();
        let c = m as f64 / 4.0;
        let p = prev_coupling.shifted(-lambda);
        Self::from_values(
            [
                c * akk.frobenius_norm_sq(),
                c * p.frobenius_norm_sq(),
                c * trace_product(akk, &p),
                c * ak1k1.frobenius_norm_sq(),
                c * coupling.frobenius_norm_sq(),
                c * trace_product(ak1k1, coupling),
            ],
            m,
            s_k,
        )
    }

    pub fn as_array(&self) -> [f64; 7] {
        [
            self.a1, self.a2, self.a3, self.a4, self.a5, self.a6, self.a7,
        ]
    }
}

/// Coefficients from the raw chain variables around index `k`:
/// `A_{k,k}`, `A_{k+1,k+1}`, `B_{k−1}`, `B_k`, `D_{k−1}`, `D_k`.
pub fn alpha_coefficients(
    akk: &SymMatrix,
    ak1k1: &SymMatrix,
    b_prev: &Matrix,
    b_k: &Matrix,
    d_prev: &SymMatrix,
    d_k: &SymMatrix,
    lambda: f64,
) -> Result<AlphaCoefficients> {
    let prev_coupling = sym_inverse(d_prev)?.congruence(b_prev);
    let coupling = sym_inverse(d_k)?.congruence(b_k);
    AlphaCoefficients::from_couplings(
        akk,
        ak1k1,
        &prev_coupling,
        &coupling,
        d_k.operator_norm(),
        lambda,
    )
}

fn check_s(s: f64) -> Result<()> {
    if s > 0.0 && s.is_finite() {
        Ok(())
    } else {
        Err(BandError::Domain(format!(
            "s must be positive and finite, got {s}"
        )))
    }
}

/// `φ_k(S_k s)`.
pub fn phi(s: f64, alpha: &AlphaCoefficients) -> Result<f64> {
    check_s(s)?;
    Ok(phi_unchecked(s, alpha))
}

pub(crate) fn phi_unchecked(s: f64, a: &AlphaCoefficients) -> f64 {
    let r = 1.0 / s - 1.0;
    a.a1 * s * s + a.a2 * (s - 1.0).powi(2) - 2.0 * a.a3 * s * (s - 1.0)
        + a.a4
        + a.a5 * r * r
        + 2.0 * a.a6 * r
        - a.a7 * (a.s_k * s).ln()
}

/// `d/ds φ_k(S_k s) = S_k φ_k'(S_k s)`.
///
/// The `s(s − 1)` cross term differentiates to `−2 a3 (2s − 1)`, so the
/// constant `+2 a3` is part of the derivative.
pub fn phi_prime(s: f64, alpha: &AlphaCoefficients) -> Result<f64> {
    check_s(s)?;
    Ok(phi_prime_unchecked(s, alpha))
}

pub(crate) fn phi_prime_unchecked(s: f64, a: &AlphaCoefficients) -> f64 {
    let inv = 1.0 / s;
    let (inv2, inv3) = (inv * inv, inv * inv * inv);
    2.0 * a.a1 * s + 2.0 * a.a2 * (s - 1.0) - 2.0 * a.a3 * (2.0 * s - 1.0)
        + 2.0 * a.a5 * (inv2 - inv3)
        - 2.0 * a.a6 * inv2
        - a.a7 * inv
}

/// `d²/ds² φ_k(S_k s) = S_k² φ_k''(S_k s)`.
pub fn phi_double_prime(s: f64, alpha: &AlphaCoefficients) -> Result<f64> {
    check_s(s)?;
    Ok(phi_double_prime_unchecked(s, alpha))
}

pub(crate) fn phi_double_prime_unchecked(s: f64, a: &AlphaCoefficients) -> f64 {
    let inv = 1.0 / s;
    let inv2 = inv * inv;
    2.0 * a.a1 + 2.0 * a.a2 - 4.0 * a.a3
        + 2.0 * a.a5 * (3.0 * inv2 * inv2 - 2.0 * inv2 * inv)
        + 4.0 * a.a6 * inv2 * inv
        + a.a7 * inv2
}

/// Exact integrability test of `e^{−φ}` on `(0, ∞)`.
///
/// At infinity the leading coefficient is `a1 + a2 − 2 a3 = (M/4)‖D_k‖²_F`;
/// at zero it is `a5`, and when `a5 = 0` the `s⁻¹` term must not grow.
pub(crate) fn check_integrable(a: &AlphaCoefficients) -> Result<()> {
    if a.a1 + a.a2 - 2.0 * a.a3 <= 0.0 {
        return Err(BandError::Integrability(
            "no quadratic confinement as s → ∞ (a1 + a2 − 2 a3 <= 0)".into(),
        ));
    }
    if a.a5 == 0.0 && a.a6 < 0.0 {
        return Err(BandError::Integrability(
            "density blows up as s → 0 (a5 = 0 with a6 < 0)".into(),
        ));
    }
    Ok(())
}

/// Mean and variance of `log s` under the density `∝ e^{−φ_k(S_k s)}` in
/// `s`. `S_k` only shifts `φ` by a constant, so the variance is also the
/// conditional variance of `log S_k`.
pub fn log_moments(alpha: &AlphaCoefficients) -> Result<LogMoments> {
    check_integrable(alpha)?;
    log_moments_of(|s| phi_unchecked(s, alpha))
}
