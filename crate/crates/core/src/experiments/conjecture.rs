//! Power-law fit of the mean conditional variance of `log S_k` against
//! `M`, with a replica-bootstrap confidence band.

use rand::Rng;

use crate::error::Result;
use crate::rng::{mix, rng_from_seed};
use crate::stats::{fit_exponent, quantile};

use super::config::ExperimentConfig;
use super::fluctuations::fluctuation_cell;
use super::record::{ExperimentOutput, ResultRecord};
use super::runner::{cell_stream, Runner};

/// Bootstrap band of the fitted slope.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlopeBand {
    pub lo: f64,
    pub hi: f64,
}

/// Percentile bootstrap (2.5%, 97.5%) of the log-log slope of mean
/// `values` against `M`, resampling replicas within each `M`.
pub fn bootstrap_slope<R: Rng + ?Sized>(
    cells: &[(usize, Vec<f64>)],
    resamples: usize,
    rng: &mut R,
) -> Result<SlopeBand> {
    let mut slopes = Vec::with_capacity(resamples);
    for _ in 0..resamples {
        let points: Vec<(f64, f64)> = cells
            .iter()
            .map(|(m, xs)| {
                let s: f64 = (0..xs.len())
                    .map(|_| xs[rng.random_range(0..xs.len())])
                    .sum();
                (*m as f64, s / xs.len() as f64)
            })
            .collect();
        slopes.push(fit_exponent(&points)?.slope);
    }
    Ok(SlopeBand {
        lo: quantile(&slopes, 0.025),
        hi: quantile(&slopes, 0.975),
    })
}

pub fn run_conjecture_scan(cfg: &ExperimentConfig, runner: &Runner) -> Result<ExperimentOutput> {
    let id = cfg.kind.id();
    let mut out = ExperimentOutput::new(id);
    for &n in &cfg.n_list {
        let mut cells = Vec::new();
        let mut flags = 0;
        for &m in &cfg.m_list {
            let (var_logs, excl) = fluctuation_cell(cfg, runner, m, n, &mut out)?;
            flags += excl.flagged;
            out.exclusions.push(excl);
            cells.push((m, var_logs));
        }
        let points: Vec<(f64, f64)> = cells
            .iter()
            .map(|(m, xs)| (*m as f64, xs.iter().sum::<f64>() / xs.len() as f64))
            .collect();
        let fit = fit_exponent(&points)?;
        let mut rng = rng_from_seed(mix(
            cfg.master_seed,
            cell_stream(cfg.kind.stream_tag(), 0, n),
        ));
        let band = bootstrap_slope(&cells, cfg.bootstrap_resamples, &mut rng)?;
        // M = 0 marks the row aggregating all M
        let mut rec = ResultRecord::summary(id, 0, n, flags);
        rec.push("slope", fit.slope)
            .push("intercept", fit.intercept)
            .push("slope_stderr", fit.stderr)
            .push("r_squared", fit.r_squared)
            .push("ci_lo", band.lo)
            .push("ci_hi", band.hi)
            .push("ci_width", band.hi - band.lo)
            .push("bootstrap_resamples", cfg.bootstrap_resamples as f64);
        out.summary.push(rec);
    }
    Ok(out)
}
