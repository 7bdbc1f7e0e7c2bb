//! Full-matrix estimates for a GOE block `G`, a Gaussian block `E` and a
//! fixed symmetric `H`: Wegner counts, the inverse-Frobenius tail, the
//! Frobenius inner product, the operator-norm tail and conjugated
//! Frobenius small values.

use crate::error::Result;
use crate::linalg::{
    eigen_count_in_interval, sample_gaussian_block, sample_goe_block, sym_inverse, trace_product,
    Interval, SymMatrix,
};
use crate::rng::{mix, rng_from_seed};

use super::config::ExperimentConfig;
use super::record::{ExperimentOutput, ResultRecord};
use super::runner::Runner;
use super::{push_frequency, push_mean};

/// Interval of the Wegner count.
pub const WEGNER_INTERVAL: (f64, f64) = (-0.2, 0.2);
/// Threshold of the operator-norm tail.
pub const OPERATOR_THRESHOLD: f64 = 3.0;
/// Relative threshold of the conjugated-Frobenius small-value event.
pub const CONJUGATED_THRESHOLD: f64 = 0.1;

/// The deterministic `H` choices at block size `m`. The GOE choice is one
/// fixed draw per `(master_seed, m)`.
pub fn h_choices(m: usize, master_seed: u64) -> Vec<(&'static str, SymMatrix)> {
    let mut rng = rng_from_seed(mix(master_seed, 0x6821_0000 + m as u64));
    let rank1 = SymMatrix::from_upper(m, |_, _| 1.0 / m as f64);
    vec![
        ("zero", SymMatrix::zeros(m)),
        ("identity", SymMatrix::identity(m)),
        ("goe", sample_goe_block(m, &mut rng)),
        ("rank1", rank1),
    ]
}

pub fn run_lemma21(cfg: &ExperimentConfig, runner: &Runner) -> Result<ExperimentOutput> {
    let id = cfg.kind.id();
    let mut out = ExperimentOutput::new(id);
    let interval = Interval::new(WEGNER_INTERVAL.0, WEGNER_INTERVAL.1)?;
    for &m in &cfg.m_list {
        let n = 1;
        let hs = h_choices(m, cfg.master_seed);
        let (reps, excl) = runner.run(
            cfg.master_seed,
            cfg.kind.stream_tag(),
            m,
            n,
            cfg.replicas,
            |rng| {
                let g = sample_goe_block(m, rng);
                let e = sample_gaussian_block(m, rng);
                let mut stats: Vec<(String, f64)> = Vec::new();
                for (name, h) in &hs {
                    let gh = g.add(h);
                    let count = eigen_count_in_interval(&gh, interval)?;
                    stats.push((
                        format!("wegner_{name}"),
                        count as f64 / (m as f64 * interval.len()),
                    ));
                    stats.push((
                        format!("inv_frobenius_{name}"),
                        sym_inverse(&gh)?.frobenius_norm(),
                    ));
                    let hf = h.frobenius_norm();
                    if hf > 0.0 {
                        let t = trace_product(&g, h);
                        stats.push((format!("dot_{name}"), t * t * m as f64 / (2.0 * hf * hf)));
                        let conj = h.congruence(&e).frobenius_norm() / hf;
                        stats.push((format!("conjugated_{name}"), conj));
                    }
                }
                stats.push(("operator_norm_e".into(), e.operator_norm()));
                Ok(stats)
            },
        )?;
        let mut columns: Vec<(String, Vec<f64>)> = Vec::new();
        for r in &reps {
            let Some(stats) = &r.value else { continue };
            let mut rec = ResultRecord::replica(id, r.index, r.seed, m, n, r.flags);
            for (i, (name, v)) in stats.iter().enumerate() {
                rec.push(name.clone(), *v);
                if columns.len() <= i {
                    columns.push((name.clone(), Vec::new()));
                }
                columns[i].1.push(*v);
            }
            out.records.push(rec);
        }
        let mut summary = ResultRecord::summary(id, m, n, excl.flagged);
        let mf = m as f64;
        for (name, xs) in &columns {
            if name.starts_with("wegner_") || name.starts_with("dot_") {
                push_mean(&mut summary, name, xs);
            } else if let Some(h) = name.strip_prefix("inv_frobenius_") {
                // P(‖(G+H)⁻¹‖_F >= t) · t / M
                for mult in [1.0, 10.0] {
                    let t = mult * mf;
                    let hits: Vec<bool> = xs.iter().map(|&x| x >= t).collect();
                    let key = format!("inv_frobenius_tail_{h}_t{mult}m");
                    push_frequency(&mut summary, &key, &hits, t / mf);
                }
            } else if let Some(h) = name.strip_prefix("conjugated_") {
                let hits: Vec<bool> = xs.iter().map(|&x| x <= CONJUGATED_THRESHOLD).collect();
                push_frequency(&mut summary, &format!("conjugated_small_{h}"), &hits, 1.0);
            } else if name == "operator_norm_e" {
                let hits: Vec<bool> = xs.iter().map(|&x| x >= OPERATOR_THRESHOLD).collect();
                push_frequency(&mut summary, "operator_tail", &hits, 1.0);
            }
        }
        summary.push("semicircle_density_at_0", std::f64::consts::FRAC_1_PI);
        out.summary.push(summary);
        out.exclusions.push(excl);
    }
    Ok(out)
}
