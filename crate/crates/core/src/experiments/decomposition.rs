//! Variance of the log corner norm against the sum of the even-index
//! conditional variances of `log S_k`.

use crate::chain::{run_chain, BlockTridiagonal};
use crate::density::log_moments;
use crate::error::Result;
use crate::stats::{summarize, variance_stderr};

use super::conditional::conditional_at;
use super::config::ExperimentConfig;
use super::record::{ExperimentOutput, ResultRecord};
use super::runner::Runner;

/// Even indices `k` with `1 < k < N`.
pub fn even_interior(n: usize) -> Vec<usize> {
    (2..n).step_by(2).collect()
}

pub fn run_decomposition(cfg: &ExperimentConfig, runner: &Runner) -> Result<ExperimentOutput> {
    let id = cfg.kind.id();
    let mut out = ExperimentOutput::new(id);
    for &m in &cfg.m_list {
        for &n in &cfg.n_list {
            let ks = even_interior(n);
            let (reps, excl) = runner.run(
                cfg.master_seed,
                cfg.kind.stream_tag(),
                m,
                n,
                cfg.replicas,
                |rng| {
                    let a = BlockTridiagonal::sample(n, m, rng)?;
                    let states = run_chain(&a, cfg.lambda)?;
                    let log_norm = states.last().expect("N >= 1").log_norm;
                    let mut var_logs = Vec::with_capacity(ks.len());
                    for &k in &ks {
                        let c = conditional_at(&a, &states, k, cfg.lambda)?;
                        var_logs.push(log_moments(&c.alpha)?.var_log);
                    }
                    Ok((log_norm, var_logs))
                },
            )?;
            let mut log_norms = Vec::with_capacity(reps.len());
            let mut sums = Vec::with_capacity(reps.len());
            for r in &reps {
                let Some((log_norm, var_logs)) = &r.value else {
                    continue;
                };
                let mut rec = ResultRecord::replica(id, r.index, r.seed, m, n, r.flags);
                rec.push("log_norm", *log_norm);
                for (&k, &v) in ks.iter().zip(var_logs) {
                    rec.push(format!("var_log_k{k}"), v);
                }
                let sum: f64 = var_logs.iter().sum();
                rec.push("var_log_sum", sum);
                out.records.push(rec);
                log_norms.push(*log_norm);
                sums.push(sum);
            }
            let lhs = summarize(&log_norms);
            let lhs_se = variance_stderr(&log_norms);
            let rhs = summarize(&sums);
            let combined = (lhs_se * lhs_se + rhs.stderr * rhs.stderr).sqrt();
            let mut rec = ResultRecord::summary(id, m, n, excl.flagged);
            rec.push("lhs", lhs.var)
                .push("lhs_se", lhs_se)
                .push("rhs", rhs.mean)
                .push("rhs_se", rhs.stderr)
                .push("combined_se", combined)
                .push("margin", lhs.var - rhs.mean)
                .push_bool("holds", lhs.var >= rhs.mean - 3.0 * combined)
                .push("rhs_over_n", rhs.mean / n as f64);
            out.summary.push(rec);
            out.exclusions.push(excl);
        }
    }
    Ok(out)
}
