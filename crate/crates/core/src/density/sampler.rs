//! Exact draws from a located one-dimensional density by envelope
//! rejection in `t = log s`, plus the quadrature CDF used to check them.

use rand::Rng;

use super::alpha::{phi_unchecked, AlphaCoefficients};
use super::quadrature::{gauss_kronrod15, LogDensity};
use crate::error::Result;

/// Cells per window piece.
const CELLS: usize = 256;
const PROBES: usize = 16;
/// Slack on the probed cell maximum.
const ENVELOPE_SLACK: f64 = 1.105_170_918_075_647_7; // e^{0.1}

/// Piecewise-constant majorant of the weight over the support window,
/// with per-cell masses for the CDF.
pub struct DensityTable<F> {
    density: LogDensity<F>,
    edges: Vec<f64>,
    bounds: Vec<f64>,
    /// Cumulative envelope mass at the right edge of each cell.
    envelope_cdf: Vec<f64>,
    /// Cumulative weight mass at the right edge of each cell.
    mass_cdf: Vec<f64>,
}

impl<F: Fn(f64) -> f64> DensityTable<F> {
    pub fn new(density: LogDensity<F>) -> Self {
        let mut edges = vec![density.window().0];
        for (lo, hi) in density.pieces() {
            let h = (hi - lo) / CELLS as f64;
            edges.extend((1..CELLS).map(|i| lo + h * i as f64));
            edges.push(hi);
        }
        let cells = edges.len() - 1;
        let mode = density.mode();
        let mut bounds = Vec::with_capacity(cells);
        let mut envelope_cdf = Vec::with_capacity(cells);
        let mut mass_cdf = Vec::with_capacity(cells);
        let (mut env_acc, mut mass_acc) = (0.0, 0.0);
        for w in edges.windows(2) {
            let (a, b) = (w[0], w[1]);
            let mut peak = (0..=PROBES)
                .map(|j| density.weight(a + (b - a) * j as f64 / PROBES as f64))
                .fold(0.0, f64::max);
            if (a..=b).contains(&mode) {
                peak = peak.max(density.weight(mode));
            }
            let bound = peak * ENVELOPE_SLACK;
            bounds.push(bound);
            env_acc += bound * (b - a);
            envelope_cdf.push(env_acc);
            mass_acc += gauss_kronrod15(&|t| density.weight(t), a, b).0;
            mass_cdf.push(mass_acc);
        }
        Self {
            density,
            edges,
            bounds,
            envelope_cdf,
            mass_cdf,
        }
    }

    pub fn density(&self) -> &LogDensity<F> {
        &self.density
    }

    /// Draws one value of `t = log s`.
    pub fn sample_log<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let total = *self.envelope_cdf.last().expect("cells");
        loop {
            let u: f64 = rng.random::<f64>() * total;
            let cell = self
                .envelope_cdf
                .partition_point(|&c| c < u)
                .min(self.bounds.len() - 1);
            let (a, b) = (self.edges[cell], self.edges[cell + 1]);
            let t = a + (b - a) * rng.random::<f64>();
            let accept: f64 = rng.random();
            if accept * self.bounds[cell] <= self.density.weight(t) {
                return t;
            }
        }
    }

    /// Normalized CDF of `t = log s` by quadrature.
    pub fn cdf_log(&self, t: f64) -> f64 {
        let (lo, hi) = self.density.window();
        if t <= lo {
            return 0.0;
        }
        let total = *self.mass_cdf.last().expect("cells");
        if t >= hi {
            return 1.0;
        }
        let cell = self
            .edges
            .partition_point(|&e| e <= t)
            .saturating_sub(1)
            .min(self.bounds.len() - 1);
        let before = if cell == 0 {
            0.0
        } else {
            self.mass_cdf[cell - 1]
        };
        let partial = gauss_kronrod15(&|x| self.density.weight(x), self.edges[cell], t).0;
        ((before + partial) / total).clamp(0.0, 1.0)
    }
}

/// `n` independent draws of `s` from the density `∝ e^{−φ_k(S_k s)}`.
pub fn sample_density<R: Rng + ?Sized>(
    alpha: &AlphaCoefficients,
    rng: &mut R,
    n: usize,
) -> Result<Vec<f64>> {
    let table = density_table(alpha)?;
    Ok((0..n).map(|_| table.sample_log(rng).exp()).collect())
}

/// Located density and sampling table for a coefficient set.
pub fn density_table(alpha: &AlphaCoefficients) -> Result<DensityTable<impl Fn(f64) -> f64 + '_>> {
    super::alpha::check_integrable(alpha)?;
    let density = LogDensity::locate(move |s| phi_unchecked(s, alpha))?;
    Ok(DensityTable::new(density))
}
