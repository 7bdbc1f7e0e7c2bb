//! Output rows of the experiments.

use serde::{Deserialize, Serialize};

/// One experiment cell: a replica (with its seed) or, when `replica` is
/// `None`, an aggregate over replicas.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultRecord {
    pub experiment: String,
    pub replica: Option<u64>,
    pub seed: Option<u64>,
    pub m: usize,
    pub n: usize,
    /// Named statistics in emission order.
    pub stats: Vec<(String, f64)>,
    /// Resamples caused by near-singular pivots.
    pub flags: u64,
}

impl ResultRecord {
    pub fn replica(
        experiment: &str,
        replica: u64,
        seed: u64,
        m: usize,
        n: usize,
        flags: u64,
    ) -> Self {
        Self {
            experiment: experiment.to_string(),
            replica: Some(replica),
            seed: Some(seed),
            m,
            n,
            stats: Vec::new(),
            flags,
        }
    }

    pub fn summary(experiment: &str, m: usize, n: usize, flags: u64) -> Self {
        Self {
            experiment: experiment.to_string(),
            replica: None,
            seed: None,
            m,
            n,
            stats: Vec::new(),
            flags,
        }
    }

    pub fn push(&mut self, name: impl Into<String>, value: f64) -> &mut Self {
        self.stats.push((name.into(), value));
        self
    }

    pub fn push_bool(&mut self, name: impl Into<String>, value: bool) -> &mut Self {
        self.push(name, if value { 1.0 } else { 0.0 })
    }

    pub fn stat(&self, name: &str) -> Option<f64> {
        self.stats.iter().find(|(k, _)| k == name).map(|&(_, v)| v)
    }
}

/// Exclusion bookkeeping for one `(M, N)` cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exclusions {
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub replicas: u64,
    /// Replicas that needed at least one resample.
    pub flagged: u64,
    /// Replicas dropped after exhausting their resamples.
    pub excluded: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentOutput {
    pub experiment: String,
    /// Per-replica rows, in replica order within each cell.
    pub records: Vec<ResultRecord>,
    /// Aggregate rows.
    pub summary: Vec<ResultRecord>,
    pub exclusions: Vec<Exclusions>,
}

impl ExperimentOutput {
    pub fn new(experiment: &str) -> Self {
        Self {
            experiment: experiment.to_string(),
            records: Vec::new(),
            summary: Vec::new(),
            exclusions: Vec::new(),
        }
    }

    /// First summary row for `(m, n)` carrying `name`.
    pub fn summary_stat(&self, m: usize, n: usize, name: &str) -> Option<f64> {
        self.summary
            .iter()
            .filter(|r| r.m == m && r.n == n)
            .find_map(|r| r.stat(name))
    }

    /// All replica values of `name` in cell `(m, n)`.
    pub fn replica_values(&self, m: usize, n: usize, name: &str) -> Vec<f64> {
        self.records
            .iter()
            .filter(|r| r.m == m && r.n == n)
            .filter_map(|r| r.stat(name))
            .collect()
    }
}
