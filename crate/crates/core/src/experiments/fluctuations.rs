//! Conditional variance of `log S_k` at a mid index, with the
//! log-concavity checks of its density.

use rand::Rng;

use crate::density::{log_moments, logconcavity_check, LogConcavityReport, LogMoments};
use crate::error::Result;
use crate::stats::quantile;

use super::conditional::{mid_index, sample_conditional, Conditional};
use super::config::ExperimentConfig;
use super::record::{Exclusions, ExperimentOutput, ResultRecord};
use super::runner::Runner;
use super::{push_frequency, push_mean};

#[derive(Clone, Debug)]
pub struct FluctuationSample {
    pub conditional: Conditional,
    pub moments: LogMoments,
    pub checks: LogConcavityReport,
}

impl FluctuationSample {
    fn stats(&self) -> Vec<(&'static str, f64)> {
        let a = &self.conditional.alpha;
        let b = |x: bool| if x { 1.0 } else { 0.0 };
        vec![
            ("var_log", self.moments.var_log),
            ("mean_log", self.moments.mean_log),
            ("quad_error", self.moments.quad_error),
            ("s_k", a.s_k),
            ("a1", a.a1),
            ("a2", a.a2),
            ("a3", a.a3),
            ("a4", a.a4),
            ("a5", a.a5),
            ("a6", a.a6),
            ("right_ok", b(self.checks.right_ok)),
            ("left_ok", b(self.checks.left_ok)),
            ("curvature_ok", b(self.checks.curvature_ok)),
            ("all_ok", b(self.checks.all_ok())),
        ]
    }
}

/// One replica: sample the chain through `k + 1`, then the conditional
/// log-moments and inequality checks at `k`.
pub fn fluctuation_replica<R: Rng + ?Sized>(
    m: usize,
    k: usize,
    lambda: f64,
    epsilon: f64,
    rng: &mut R,
) -> Result<FluctuationSample> {
    let conditional = sample_conditional(m, k, lambda, rng)?;
    let moments = log_moments(&conditional.alpha)?;
    let checks = logconcavity_check(&conditional.alpha, epsilon)?;
    Ok(FluctuationSample {
        conditional,
        moments,
        checks,
    })
}

/// Runs the replicas of one `(M, N)` cell, appends their rows to `out` and
/// returns the `var_log` values in replica order.
pub(crate) fn fluctuation_cell(
    cfg: &ExperimentConfig,
    runner: &Runner,
    m: usize,
    n: usize,
    out: &mut ExperimentOutput,
) -> Result<(Vec<f64>, Exclusions)> {
    let id = cfg.kind.id();
    let k = mid_index(n)?;
    let (reps, excl) = runner.run(
        cfg.master_seed,
        cfg.kind.stream_tag(),
        m,
        n,
        cfg.replicas,
        |rng| fluctuation_replica(m, k, cfg.lambda, cfg.epsilon, rng),
    )?;
    let mut var_logs = Vec::with_capacity(reps.len());
    let mut oks: [Vec<bool>; 4] = Default::default();
    for r in &reps {
        let Some(sample) = &r.value else { continue };
        let mut rec = ResultRecord::replica(id, r.index, r.seed, m, n, r.flags);
        for (name, v) in sample.stats() {
            rec.push(name, v);
        }
        out.records.push(rec);
        var_logs.push(sample.moments.var_log);
        let c = &sample.checks;
        for (i, ok) in [c.right_ok, c.left_ok, c.curvature_ok, c.all_ok()]
            .into_iter()
            .enumerate()
        {
            oks[i].push(ok);
        }
    }
    let mut summary = ResultRecord::summary(id, m, n, excl.flagged);
    summary.push("k", k as f64);
    push_mean(&mut summary, "var_log", &var_logs);
    for q in [0.05, 0.25, 0.5, 0.75, 0.95] {
        summary.push(
            format!("var_log_q{:02}", (q * 100.0) as u32),
            quantile(&var_logs, q),
        );
    }
    summary.push(
        "var_log_min",
        var_logs.iter().copied().fold(f64::INFINITY, f64::min),
    );
    let bound = (m as f64).powf(-3.0 - cfg.epsilon);
    summary.push("lower_bound", bound);
    let mean = var_logs.iter().sum::<f64>() / var_logs.len() as f64;
    summary.push_bool("mean_ge_lower_bound", mean >= bound);
    for (i, name) in ["right_ok", "left_ok", "curvature_ok", "all_ok"]
        .iter()
        .enumerate()
    {
        push_frequency(&mut summary, &format!("freq_{name}"), &oks[i], 1.0);
    }
    out.summary.push(summary);
    Ok((var_logs, excl))
}

pub fn run_fluctuations(cfg: &ExperimentConfig, runner: &Runner) -> Result<ExperimentOutput> {
    let mut out = ExperimentOutput::new(cfg.kind.id());
    for &m in &cfg.m_list {
        for &n in &cfg.n_list {
            let (_, excl) = fluctuation_cell(cfg, runner, m, n, &mut out)?;
            out.exclusions.push(excl);
        }
    }
    Ok(out)
}
