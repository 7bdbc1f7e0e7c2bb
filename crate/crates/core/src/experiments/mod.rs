//! Monte Carlo drivers. Every replica draws from a seed fixed by the master
//! seed, the experiment kind, the cell `(M, N)` and the replica index, and
//! results are collected in replica order, so output does not depend on
//! the number of workers.

mod conditional;
mod config;
mod conjecture;
mod decay;
mod decomposition;
mod fluctuations;
mod lemma21;
mod lemma22;
mod record;
mod runner;
mod sample;
mod selftest;

pub use conditional::{conditional_at, mid_index, sample_conditional, Conditional};
pub use config::{ExperimentConfig, ExperimentKind};
pub use conjecture::{bootstrap_slope, run_conjecture_scan, SlopeBand};
pub use decay::{run_decay, CROSS_CHECK_REPLICAS};
pub use decomposition::{even_interior, run_decomposition};
pub use fluctuations::{fluctuation_replica, run_fluctuations, FluctuationSample};
pub use lemma21::{
    h_choices, run_lemma21, CONJUGATED_THRESHOLD, OPERATOR_THRESHOLD, WEGNER_INTERVAL,
};
pub use lemma22::{run_lemma22, SizeQuantities, EVENT_NAMES};
pub use record::{Exclusions, ExperimentOutput, ResultRecord};
pub use runner::{cell_stream, Replica, Runner, MAX_ATTEMPTS, MAX_FLAG_RATE};
pub use sample::run_sample;
pub use selftest::{
    expansion_and_direct, finite_difference_errors, log_uniform, rel_err, run_selftest, FD_STEP,
};

use crate::error::Result;
use crate::stats::summarize;

/// Validates `cfg` and runs it on `workers` threads (0 = automatic).
pub fn run_experiment(cfg: &ExperimentConfig, workers: usize) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let runner = Runner::new(workers)?;
    match cfg.kind {
        ExperimentKind::Sample => run_sample(cfg, &runner),
        ExperimentKind::Decay => run_decay(cfg, &runner),
        ExperimentKind::Fluctuations => run_fluctuations(cfg, &runner),
        ExperimentKind::Lemma21 => run_lemma21(cfg, &runner),
        ExperimentKind::Lemma22 => run_lemma22(cfg, &runner),
        ExperimentKind::Decomposition => run_decomposition(cfg, &runner),
        ExperimentKind::ConjectureScan => run_conjecture_scan(cfg, &runner),
        ExperimentKind::Selftest => run_selftest(cfg),
    }
}

/// Appends `{name}_mean` and `{name}_se`.
pub(crate) fn push_mean(rec: &mut ResultRecord, name: &str, xs: &[f64]) {
    let s = summarize(xs);
    rec.push(format!("{name}_mean"), s.mean);
    rec.push(format!("{name}_se"), s.stderr);
}

/// Appends `scale · p` and its binomial standard error for the hit
/// frequency `p`.
pub(crate) fn push_frequency(rec: &mut ResultRecord, name: &str, hits: &[bool], scale: f64) {
    let n = hits.len() as f64;
    let p = hits.iter().filter(|&&h| h).count() as f64 / n;
    rec.push(name.to_string(), scale * p);
    rec.push(format!("{name}_se"), scale * (p * (1.0 - p) / n).sqrt());
}
