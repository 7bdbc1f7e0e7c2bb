//! Typical sizes of the chain variables at a mid index `k`: the Frobenius
//! sandwiches for `A_{k+1,k+1}` and `Q = B_kᵀ D_k⁻¹ B_k` and the two trace
//! bounds.

use crate::error::Result;
use crate::linalg::trace_product;

use super::conditional::{mid_index, sample_conditional};
use super::config::ExperimentConfig;
use super::push_frequency;
use super::record::{ExperimentOutput, ResultRecord};
use super::runner::Runner;

/// Raw quantities behind the four events; kept per replica so the events
/// can be re-evaluated at any `ε`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SizeQuantities {
    /// `‖A_{k+1,k+1}‖_F`
    pub a_frobenius: f64,
    /// `‖Q‖_F`
    pub q_frobenius: f64,
    /// `tr A_{k+1,k+1}(λ + Q)`
    pub trace_lambda_q: f64,
    /// `tr A_{k+1,k+1} Q`
    pub trace_q: f64,
}

pub const EVENT_NAMES: [&str; 4] = ["a_sandwich", "q_sandwich", "trace_lambda_q", "trace_q"];

impl SizeQuantities {
    /// The four events at block size `m` and tolerance `epsilon`.
    pub fn events(&self, m: usize, epsilon: f64) -> [bool; 4] {
        let mf = m as f64;
        let lo = mf.powf(0.5 - epsilon);
        let half_hi = mf.powf(0.5 + epsilon);
        [
            lo <= self.a_frobenius && self.a_frobenius <= half_hi,
            lo <= self.q_frobenius && self.q_frobenius <= mf.powf(1.0 + epsilon),
            self.trace_lambda_q.abs() <= half_hi,
            self.trace_q.abs() <= half_hi,
        ]
    }

    fn stats(&self) -> [(&'static str, f64); 4] {
        [
            ("a_frobenius", self.a_frobenius),
            ("q_frobenius", self.q_frobenius),
            ("trace_lambda_q", self.trace_lambda_q),
            ("trace_q", self.trace_q),
        ]
    }

    /// Rebuilds the quantities from a replica record.
    pub fn from_record(rec: &ResultRecord) -> Option<Self> {
        Some(Self {
            a_frobenius: rec.stat("a_frobenius")?,
            q_frobenius: rec.stat("q_frobenius")?,
            trace_lambda_q: rec.stat("trace_lambda_q")?,
            trace_q: rec.stat("trace_q")?,
        })
    }
}

pub fn run_lemma22(cfg: &ExperimentConfig, runner: &Runner) -> Result<ExperimentOutput> {
    let id = cfg.kind.id();
    let mut out = ExperimentOutput::new(id);
    for &m in &cfg.m_list {
        for &n in &cfg.n_list {
            let k = mid_index(n)?;
            let (reps, excl) = runner.run(
                cfg.master_seed,
                cfg.kind.stream_tag(),
                m,
                n,
                cfg.replicas,
                |rng| {
                    let c = sample_conditional(m, k, cfg.lambda, rng)?;
                    Ok(SizeQuantities {
                        a_frobenius: c.a_next.frobenius_norm(),
                        q_frobenius: c.coupling.frobenius_norm(),
                        trace_lambda_q: trace_product(&c.a_next, c.coupling.shifted(-cfg.lambda)),
                        trace_q: trace_product(&c.a_next, &c.coupling),
                    })
                },
            )?;
            let mut hits: [Vec<bool>; 5] = Default::default();
            for r in &reps {
                let Some(q) = &r.value else { continue };
                let mut rec = ResultRecord::replica(id, r.index, r.seed, m, n, r.flags);
                for (name, v) in q.stats() {
                    rec.push(name, v);
                }
                out.records.push(rec);
                let ev = q.events(m, cfg.epsilon);
                for (i, &e) in ev.iter().enumerate() {
                    hits[i].push(e);
                }
                hits[4].push(ev.iter().all(|&e| e));
            }
            let mut summary = ResultRecord::summary(id, m, n, excl.flagged);
            summary.push("k", k as f64).push("epsilon", cfg.epsilon);
            for (i, name) in EVENT_NAMES.iter().chain(["all"].iter()).enumerate() {
                push_frequency(&mut summary, &format!("freq_{name}"), &hits[i], 1.0);
            }
            out.summary.push(summary);
            out.exclusions.push(excl);
        }
    }
    Ok(out)
}
