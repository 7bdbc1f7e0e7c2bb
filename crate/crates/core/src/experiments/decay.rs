//! Exponential decay of the corner block in `N`.
//!
//! Each replica runs one chain of length `max N`; by the prefix property
//! of the sampler its partial products are the corners of the shorter
//! matrices, so every `N` is measured on common random numbers.

use crate::chain::{corner_direct, corner_log_norm, BlockTridiagonal, DENSE_ORACLE_LIMIT};
use crate::error::Result;
use crate::rng::{attempt_seed, rng_from_seed};
use crate::stats::{fit_line, log_mean_exp};

use super::config::ExperimentConfig;
use super::push_mean;
use super::record::{ExperimentOutput, ResultRecord};
use super::runner::Runner;

/// Replicas re-checked against dense inversion when `cross_check` is set.
pub const CROSS_CHECK_REPLICAS: u64 = 8;

pub fn run_decay(cfg: &ExperimentConfig, runner: &Runner) -> Result<ExperimentOutput> {
    let id = cfg.kind.id();
    let mut out = ExperimentOutput::new(id);
    let mut ns = cfg.n_list.clone();
    ns.sort_unstable();
    ns.dedup();
    let n_max = *ns.last().expect("validated nonempty");
    for &m in &cfg.m_list {
        let (reps, excl) = runner.run(
            cfg.master_seed,
            cfg.kind.stream_tag(),
            m,
            n_max,
            cfg.replicas,
            |rng| {
                let a = BlockTridiagonal::sample(n_max, m, rng)?;
                let corner = corner_log_norm(&a, cfg.lambda, false)?;
                Ok(ns
                    .iter()
                    .map(|&n| corner.trace[n - 1].log_norm)
                    .collect::<Vec<f64>>())
            },
        )?;
        let mut per_n: Vec<Vec<f64>> = vec![Vec::new(); ns.len()];
        for r in &reps {
            let Some(values) = &r.value else { continue };
            for (i, (&n, &v)) in ns.iter().zip(values).enumerate() {
                let mut rec = ResultRecord::replica(id, r.index, r.seed, m, n, r.flags);
                rec.push("log_norm", v);
                out.records.push(rec);
                per_n[i].push(v);
            }
        }
        let mut means = Vec::with_capacity(ns.len());
        for (&n, values) in ns.iter().zip(&per_n) {
            let mut rec = ResultRecord::summary(id, m, n, excl.flagged);
            push_mean(&mut rec, "log_norm", values);
            let mean = values.iter().sum::<f64>() / values.len() as f64;
            rec.push("rate_proxy", -mean / n as f64);
            let scaled: Vec<f64> = values.iter().map(|v| (1.0 - cfg.epsilon) * v).collect();
            let lme = log_mean_exp(&scaled);
            rec.push("log_mean_norm_pow", lme)
                .push("mean_norm_pow", lme.exp());
            out.summary.push(rec);
            means.push((n as f64, mean));
        }
        let fit = fit_line(&means)?;
        let floor = (m as f64).powi(-3);
        // N = 0 marks the per-M fit row
        let mut rec = ResultRecord::summary(id, m, 0, excl.flagged);
        rec.push("decay_rate", -fit.slope)
            .push("decay_rate_stderr", fit.stderr)
            .push("intercept", fit.intercept)
            .push("r_squared", fit.r_squared)
            .push("rate_floor", floor)
            .push_bool("rate_ge_floor", -fit.slope >= floor);
        if cfg.cross_check {
            let mut worst: f64 = 0.0;
            for r in reps.iter().take(CROSS_CHECK_REPLICAS as usize) {
                if r.value.is_none() {
                    continue;
                }
                let mut rng = rng_from_seed(attempt_seed(r.seed, r.flags as u32));
                let a = BlockTridiagonal::sample(n_max, m, &mut rng)?;
                let values = r.value.as_ref().expect("checked");
                for (&n, &v) in ns.iter().zip(values) {
                    if n * m > DENSE_ORACLE_LIMIT {
                        continue;
                    }
                    let prefix = BlockTridiagonal::new(
                        a.diag_blocks()[..n].to_vec(),
                        a.offdiag_blocks()[..n - 1].to_vec(),
                    )?;
                    let direct = corner_direct(&prefix, cfg.lambda)?.operator_norm().ln();
                    worst = worst.max((v - direct).abs() / direct.abs().max(1.0));
                }
            }
            rec.push("cross_check_max_rel_err", worst);
        }
        out.summary.push(rec);
        out.exclusions.push(excl);
    }
    Ok(out)
}
