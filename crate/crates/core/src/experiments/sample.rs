//! Raw draws of the block model: block sizes, `S_1` and the corner norm.

use crate::chain::{corner_log_norm, BlockTridiagonal};
use crate::error::Result;

use super::config::ExperimentConfig;
use super::push_mean;
use super::record::{ExperimentOutput, ResultRecord};
use super::runner::Runner;

pub fn run_sample(cfg: &ExperimentConfig, runner: &Runner) -> Result<ExperimentOutput> {
    let id = cfg.kind.id();
    let mut out = ExperimentOutput::new(id);
    for &m in &cfg.m_list {
        for &n in &cfg.n_list {
            let (reps, excl) = runner.run(
                cfg.master_seed,
                cfg.kind.stream_tag(),
                m,
                n,
                cfg.replicas,
                |rng| {
                    let a = BlockTridiagonal::sample(n, m, rng)?;
                    let corner = corner_log_norm(&a, cfg.lambda, false)?;
                    let mut stats = vec![
                        ("a11_frobenius_sq", a.diag(0).frobenius_norm_sq()),
                        ("s1", corner.trace[0].s),
                        ("corner_log_norm", corner.log_norm),
                    ];
                    if n > 1 {
                        stats.push(("a12_frobenius_sq", a.offdiag(0).frobenius_norm_sq()));
                    }
                    Ok(stats)
                },
            )?;
            let mut summary = ResultRecord::summary(id, m, n, excl.flagged);
            let mut columns: Vec<(&str, Vec<f64>)> = Vec::new();
            for r in &reps {
                let Some(stats) = &r.value else { continue };
                let mut rec = ResultRecord::replica(id, r.index, r.seed, m, n, r.flags);
                for (i, &(name, v)) in stats.iter().enumerate() {
                    rec.push(name, v);
                    if columns.len() <= i {
                        columns.push((name, Vec::new()));
                    }
                    columns[i].1.push(v);
                }
                out.records.push(rec);
            }
            for (name, xs) in &columns {
                push_mean(&mut summary, name, xs);
            }
            summary.push("expected_a11_frobenius_sq", m as f64 + 1.0);
            if n > 1 {
                summary.push("expected_a12_frobenius_sq", m as f64);
            }
            out.summary.push(summary);
            out.exclusions.push(excl);
        }
    }
    Ok(out)
}
