//! Log-coordinate quadrature for one-dimensional densities on `(0, ∞)`.
//!
//! A density `∝ e^{−ψ(s)}` is handled in `t = log s`, where it becomes
//! `∝ e^{−g(t)}` with `g(t) = ψ(eᵗ) − t`. The support window is the set
//! where `g − min g ≤ cutoff`; it is located by a coarse scan plus a local
//! search around the mode, so narrow peaks are never stepped over.

use crate::error::{BandError, Result};

/// Relative cutoff `e^{−60}` of the support window.
pub const DEFAULT_CUTOFF: f64 = 60.0;

const SCAN_HALF_WIDTH: f64 = 100.0;
const SCAN_STEP: f64 = 0.05;
const REL_TOL: f64 = 1e-12;
const MAX_INTERVALS: usize = 4000;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One Gauss–Kronrod 7/15 panel: `(integral, error estimate)`.
pub fn gauss_kronrod15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let (v, e, _) = gk15(f, a, b);
    (v, e)
}

/// Panel value, error estimate and integral of `|f|`.
fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut res_abs = kronrod.abs();
    let mut fv = [(0.0, 0.0); 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let (f1, f2) = (f(center - dx), f(center + dx));
        fv[j] = (f1, f2);
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv[j].0 - mean).abs() + (fv[j].1 - mean).abs());
    }
    let (kronrod, res_abs, res_asc) = (kronrod * half, res_abs * half.abs(), res_asc * half.abs());
    let mut err = (kronrod - gauss * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (kronrod, err, res_abs)
}

/// Globally adaptive Gauss–Kronrod integration over `[a, b]`, started from
/// `pieces` equal panels. Returns `(integral, error estimate)`.
///
/// The relative tolerance is measured against `∫|f|`, so sign-changing
/// integrands with near-zero total (first moments about the mode) still
/// terminate.
pub fn integrate_adaptive(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    pieces: usize,
    rel_tol: f64,
    abs_tol: f64,
) -> (f64, f64) {
    let pieces = pieces.max(1);
    let h = (b - a) / pieces as f64;
    let mut panels: Vec<(f64, f64, f64, f64, f64)> = (0..pieces)
        .map(|i| {
            let lo = a + h * i as f64;
            let hi = if i + 1 == pieces { b } else { lo + h };
            let (v, e, l1) = gk15(f, lo, hi);
            (lo, hi, v, e, l1)
        })
        .collect();
    loop {
        let total: f64 = panels.iter().map(|p| p.2).sum();
        let err: f64 = panels.iter().map(|p| p.3).sum();
        let l1: f64 = panels.iter().map(|p| p.4).sum();
        if err <= abs_tol.max(rel_tol * l1) || panels.len() >= MAX_INTERVALS {
            return (total, err);
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .expect("nonempty");
        let (lo, hi, _, _, _) = panels.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if !(mid > lo && mid < hi) {
            // interval at floating-point resolution
            return (total, err);
        }
        let (v1, e1, l1) = gk15(f, lo, mid);
        let (v2, e2, l2) = gk15(f, mid, hi);
        panels.push((lo, mid, v1, e1, l1));
        panels.push((mid, hi, v2, e2, l2));
    }
}

/// Mean and variance of `log s` under a normalized density on `(0, ∞)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogMoments {
    pub mean_log: f64,
    pub var_log: f64,
    /// Estimated absolute quadrature error of `var_log`.
    pub quad_error: f64,
    /// Support window in log coordinates.
    pub support_window: (f64, f64),
}

/// A density `∝ e^{−ψ(s)}` located in log coordinates.
pub struct LogDensity<F> {
    psi: F,
    mode: f64,
    g_min: f64,
    window: (f64, f64),
    /// Window around the main mode; integrated as its own piece so a very
    /// narrow peak is not missed inside the coarser outer window.
    core: (f64, f64),
}

impl<F: Fn(f64) -> f64> LogDensity<F> {
    pub fn locate(psi: F) -> Result<Self> {
        Self::locate_with_cutoff(psi, DEFAULT_CUTOFF)
    }

    pub fn locate_with_cutoff(psi: F, cutoff: f64) -> Result<Self> {
        let g = |t: f64| {
            let v = psi(t.exp()) - t;
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };
        let n = (2.0 * SCAN_HALF_WIDTH / SCAN_STEP).round() as usize;
        let grid: Vec<(f64, f64)> = (0..=n)
            .map(|i| {
                let t = -SCAN_HALF_WIDTH + SCAN_STEP * i as f64;
                (t, g(t))
            })
            .collect();
        let (imin, _) = grid
            .iter()
            .enumerate()
            .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
            .expect("nonempty grid");
        if !grid[imin].1.is_finite() {
            return Err(BandError::Integrability(
                "density vanishes on the scan range".into(),
            ));
        }
        if imin == 0 || imin == n {
            return Err(BandError::Integrability(
                "log-density keeps decreasing at the edge of the scan range".into(),
            ));
        }
        let (mode, g_min) = golden_min(&g, grid[imin - 1].0, grid[imin + 1].0);
        let g_min = g_min.min(grid[imin].1);
        let inside = |t: f64| g(t) - g_min <= cutoff;

        let core = (
            crossing(&inside, mode, -1.0)?,
            crossing(&inside, mode, 1.0)?,
        );
        let (mut lo, mut hi) = core;
        // other modes seen on the scan
        for &(t, gt) in &grid {
            if gt - g_min <= cutoff {
                lo = lo.min(t - SCAN_STEP);
                hi = hi.max(t + SCAN_STEP);
            }
        }
        if lo <= -SCAN_HALF_WIDTH || hi >= SCAN_HALF_WIDTH {
            return Err(BandError::Integrability(format!(
                "support window [{lo:.1}, {hi:.1}] reaches the scan boundary"
            )));
        }
        Ok(Self {
            psi,
            mode,
            g_min,
            window: (lo, hi),
            core,
        })
    }

    /// Unnormalized weight in log coordinates, `e^{−(g(t) − min g)}`.
    pub fn weight(&self, t: f64) -> f64 {
        let v = (self.psi)(t.exp()) - t - self.g_min;
        if v.is_nan() {
            0.0
        } else {
            (-v).exp()
        }
    }

    pub fn mode(&self) -> f64 {
        self.mode
    }

    pub fn window(&self) -> (f64, f64) {
        self.window
    }

    pub fn psi(&self, s: f64) -> f64 {
        (self.psi)(s)
    }

    /// The window split at the edges of the main mode's own window; the
    /// pieces are consecutive and cover the window.
    pub fn pieces(&self) -> Vec<(f64, f64)> {
        [
            (self.window.0, self.core.0),
            self.core,
            (self.core.1, self.window.1),
        ]
        .into_iter()
        .filter(|(a, b)| b > a)
        .collect()
    }

    fn integrate(&self, f: impl Fn(f64) -> f64) -> (f64, f64) {
        self.pieces()
            .into_iter()
            .map(|(a, b)| integrate_adaptive(&f, a, b, 16, REL_TOL, 0.0))
            .fold((0.0, 0.0), |acc, (v, e)| (acc.0 + v, acc.1 + e))
    }

    /// Integral of the weight over the window (the normalizer in `t`).
    pub fn normalizer(&self) -> (f64, f64) {
        self.integrate(|t| self.weight(t))
    }

    pub fn moments(&self) -> LogMoments {
        let (z, ez) = self.normalizer();
        let c = self.mode;
        let (m1, e1) = self.integrate(|t| (t - c) * self.weight(t));
        let shift = m1 / z;
        let mean = c + shift;
        let (m2, e2) = self.integrate(|t| (t - mean).powi(2) * self.weight(t));
        let var = m2 / z;
        let quad_error = e2 / z + var * ez / z + 2.0 * shift.abs() * e1 / z;
        LogMoments {
            mean_log: mean,
            var_log: var,
            quad_error,
            support_window: self.window,
        }
    }
}

/// Mean and variance of `log s` under the density `∝ e^{−ψ(s)}`.
pub fn log_moments_of(psi: impl Fn(f64) -> f64) -> Result<LogMoments> {
    let m = LogDensity::locate(psi)?.moments();
    if !(m.mean_log.is_finite() && m.var_log.is_finite() && m.var_log > 0.0) {
        return Err(BandError::Integrability(format!(
            "quadrature produced mean {} and variance {}",
            m.mean_log, m.var_log
        )));
    }
    Ok(m)
}

fn golden_min(g: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (g(x1), g(x2));
    for _ in 0..200 {
        if b - a <= 1e-14 * (1.0 + a.abs()) {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = g(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = g(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Walks from `start` (inside) in direction `dir` with doubling steps until
/// leaving the window, then bisects to the boundary.
fn crossing(inside: &impl Fn(f64) -> bool, start: f64, dir: f64) -> Result<f64> {
    let mut step = 1e-7;
    let mut last_in = start;
    loop {
        let t = (start + dir * step).clamp(-SCAN_HALF_WIDTH, SCAN_HALF_WIDTH);
        if inside(t) {
            if t.abs() >= SCAN_HALF_WIDTH {
                return Err(BandError::Integrability(
                    "density tail extends past the scan range".into(),
                ));
            }
            last_in = t;
            step *= 2.0;
        } else {
            let mut out = t;
            for _ in 0..60 {
                let mid = 0.5 * (last_in + out);
                if inside(mid) {
                    last_in = mid;
                } else {
                    out = mid;
                }
            }
            return Ok(out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::trigamma;

    #[test]
    fn gauss_kronrod_polynomial_exact() {
        let (v, e) = gauss_kronrod15(&|x: f64| x.powi(10), 0.0, 1.0);
        assert!((v - 1.0 / 11.0).abs() < 1e-15);
        assert!(e < 1e-12);
    }

    #[test]
    fn adaptive_handles_narrow_peak() {
        let w = 1e-4;
        let f = |x: f64| (-(x - 0.3).powi(2) / (2.0 * w * w)).exp();
        let (v, _) = integrate_adaptive(&f, -1.0, 1.0, 16, 1e-12, 0.0);
        let exact = w * (2.0 * std::f64::consts::PI).sqrt();
        assert!((v - exact).abs() < 1e-10 * exact);
    }

    #[test]
    fn generalized_gamma_variance() {
        // s^a e^{-b s²}: var(log s) = trigamma((a + 1)/2) / 4
        for (a, b) in [(9.0, 1.0), (2.0, 30.0), (40.0, 0.01)] {
            let m = log_moments_of(|s: f64| b * s * s - a * s.ln()).unwrap();
            let expected = 0.25 * trigamma((a + 1.0) / 2.0);
            assert!(
                (m.var_log - expected).abs() < 1e-9,
                "a={a} b={b}: {} vs {expected}",
                m.var_log
            );
            assert!(m.quad_error <= 1e-8 * m.var_log.max(1.0));
        }
    }

    #[test]
    fn non_integrable_rejected() {
        // s^{-2} near zero
        assert!(log_moments_of(|s: f64| s + 2.0 * s.ln()).is_err());
        // flat in t at +∞
        assert!(log_moments_of(|s: f64| s.ln()).is_err());
    }
}
