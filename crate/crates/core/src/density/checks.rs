//! Grid checks of the log-concavity estimates for `φ_k` and the chi
//! self-test of the norm/direction machinery.

use super::alpha::{phi_double_prime_unchecked, phi_prime_unchecked, AlphaCoefficients};
use super::quadrature::{integrate_adaptive, LogDensity};
use crate::error::{BandError, Result};
use crate::special::trigamma;

/// Points per inequality range.
pub const GRID_POINTS: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogConcavityReport {
    /// `d/ds φ(S_k s) ≥ M^{2−ε} s` on `[M^ε, M²]`.
    pub right_ok: bool,
    /// `d/ds φ(S_k s) ≤ −M^{2−ε} s⁻³` on `[M⁻², M^{−ε}]`.
    pub left_ok: bool,
    /// `|d²/ds² φ(S_k s)| ≤ M^{3+ε} (1 + s⁻⁴)` on `[M⁻², M²]`.
    pub curvature_ok: bool,
    /// Truncation of the unbounded ranges.
    pub s_min: f64,
    pub s_max: f64,
}

impl LogConcavityReport {
    pub fn all_ok(&self) -> bool {
        self.right_ok && self.left_ok && self.curvature_ok
    }
}

fn log_grid(lo: f64, hi: f64) -> impl Iterator<Item = f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..GRID_POINTS).map(move |i| (a + (b - a) * i as f64 / (GRID_POINTS - 1) as f64).exp())
}

pub fn logconcavity_check(alpha: &AlphaCoefficients, epsilon: f64) -> Result<LogConcavityReport> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(BandError::Domain(format!(
            "epsilon must lie in (0,1), got {epsilon}"
        )));
    }
    let m = alpha.m as f64;
    let growth = m.powf(2.0 - epsilon);
    let curvature = m.powf(3.0 + epsilon);
    let (s_min, s_max) = (m.powi(-2), m.powi(2));
    let right_ok =
        log_grid(m.powf(epsilon), s_max).all(|s| phi_prime_unchecked(s, alpha) >= growth * s);
    let left_ok = log_grid(s_min, m.powf(-epsilon))
        .all(|s| phi_prime_unchecked(s, alpha) <= -growth * s.powi(-3));
    let curvature_ok = log_grid(s_min, s_max)
        .all(|s| phi_double_prime_unchecked(s, alpha).abs() <= curvature * (1.0 + s.powi(-4)));
    Ok(LogConcavityReport {
        right_ok,
        left_ok,
        curvature_ok,
        s_min,
        s_max,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormDirectionReport {
    pub n: usize,
    pub var_log: f64,
    /// `trigamma(n/2) / 4`.
    pub expected: f64,
    pub abs_error: f64,
    /// Integral of the normalized density, by an independent composite rule.
    pub normalization: f64,
}

impl NormDirectionReport {
    pub fn passed(&self) -> bool {
        self.abs_error <= 1e-6 && (self.normalization - 1.0).abs() <= 1e-9
    }
}

/// Norm of a standard Gaussian vector in `Rⁿ`: the radial density
/// `y^{n−1} e^{−y²/2}` is the chi law, and `var log Y = trigamma(n/2)/4`.
pub fn norm_direction_selftest(n: usize) -> Result<NormDirectionReport> {
    if n == 0 {
        return Err(BandError::Domain("dimension must be at least 1".into()));
    }
    let exponent = (n - 1) as f64;
    let density = LogDensity::locate(move |y: f64| 0.5 * y * y - exponent * y.ln())?;
    let moments = density.moments();
    let (z, _) = density.normalizer();
    let (lo, hi) = density.window();
    // composite rule on many equal panels, no adaptivity
    let panels = 4096;
    let (total, _) = integrate_adaptive(
        &|t| density.weight(t) / z,
        lo,
        hi,
        panels,
        1.0,
        f64::INFINITY,
    );
    let expected = 0.25 * trigamma(n as f64 / 2.0);
    Ok(NormDirectionReport {
        n,
        var_log: moments.var_log,
        expected,
        abs_error: (moments.var_log - expected).abs(),
        normalization: total,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn chi_selftest_values() {
        let r2 = norm_direction_selftest(2).unwrap();
        assert!((r2.expected - PI * PI / 24.0).abs() < 1e-14);
        assert!(r2.passed(), "{r2:?}");
        let r1 = norm_direction_selftest(1).unwrap();
        assert!((r1.expected - PI * PI / 8.0).abs() < 1e-13);
        assert!(r1.passed(), "{r1:?}");
        assert!(norm_direction_selftest(5).unwrap().passed());
    }

    #[test]
    fn boundary_alphas_pass() {
        let m = 64usize;
        let m2 = (m * m) as f64;
        let a = AlphaCoefficients::from_values([m2, m2, 0.0, m2, m2, 0.0], m, 1.0).unwrap();
        let r = logconcavity_check(&a, 0.25).unwrap();
        assert!(r.all_ok(), "{r:?}");
        assert_eq!((r.s_min, r.s_max), (1.0 / m2, m2));
    }

    #[test]
    fn no_inverse_push_fails_left() {
        let m = 64usize;
        let m2 = (m * m) as f64;
        let a = AlphaCoefficients::from_values([m2, m2, 0.0, m2, 0.0, 0.0], m, 1.0).unwrap();
        assert!(!logconcavity_check(&a, 0.25).unwrap().left_ok);
    }

    #[test]
    fn epsilon_range_checked() {
        let a = AlphaCoefficients::from_values([1.0; 6], 4, 1.0).unwrap();
        assert!(logconcavity_check(&a, 0.0).is_err());
        assert!(logconcavity_check(&a, 1.0).is_err());
    }
}
