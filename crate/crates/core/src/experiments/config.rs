//! Declarative experiment description, read from JSON.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::chain::DENSE_ORACLE_LIMIT;
use crate::error::{BandError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Sample,
    Decay,
    Fluctuations,
    Lemma21,
    Lemma22,
    Decomposition,
    ConjectureScan,
    Selftest,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 8] = [
        ExperimentKind::Sample,
        ExperimentKind::Decay,
        ExperimentKind::Fluctuations,
        ExperimentKind::Lemma21,
        ExperimentKind::Lemma22,
        ExperimentKind::Decomposition,
        ExperimentKind::ConjectureScan,
        ExperimentKind::Selftest,
    ];

    /// Identifier used in file names and the `experiment` CSV column.
    pub fn id(self) -> &'static str {
        match self {
            ExperimentKind::Sample => "sample",
            ExperimentKind::Decay => "decay",
            ExperimentKind::Fluctuations => "fluctuations",
            ExperimentKind::Lemma21 => "lemma21",
            ExperimentKind::Lemma22 => "lemma22",
            ExperimentKind::Decomposition => "decomposition",
            ExperimentKind::ConjectureScan => "conjecture_scan",
            ExperimentKind::Selftest => "selftest",
        }
    }

    /// Command-line subcommand running this kind.
    pub fn subcommand(self) -> &'static str {
        match self {
            ExperimentKind::Decomposition => "decompose",
            ExperimentKind::ConjectureScan => "conjecture",
            other => other.id(),
        }
    }

    /// Tag mixed into every replica seed so different experiments never
    /// share streams.
    pub(crate) fn stream_tag(self) -> u64 {
        ExperimentKind::ALL
            .iter()
            .position(|&k| k == self)
            .expect("listed") as u64
            + 1
    }

    fn default_m_list(self) -> Vec<usize> {
        match self {
            ExperimentKind::Decay => vec![2, 4, 8],
            ExperimentKind::Fluctuations | ExperimentKind::ConjectureScan => vec![8, 16, 32, 64],
            ExperimentKind::Lemma21 | ExperimentKind::Lemma22 => vec![16, 32, 64],
            ExperimentKind::Decomposition => vec![4],
            ExperimentKind::Sample => vec![16],
            ExperimentKind::Selftest => vec![4],
        }
    }

    fn default_n_list(self) -> Vec<usize> {
        match self {
            ExperimentKind::Decay => vec![25, 50, 75, 100, 125, 150, 175, 200],
            ExperimentKind::Fluctuations
            | ExperimentKind::ConjectureScan
            | ExperimentKind::Lemma22 => vec![8],
            ExperimentKind::Decomposition => vec![4],
            ExperimentKind::Sample => vec![4],
            ExperimentKind::Lemma21 | ExperimentKind::Selftest => vec![1],
        }
    }
}

fn default_epsilon() -> f64 {
    0.25
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("results")
}

fn default_bootstrap() -> usize {
    1000
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    #[serde(rename = "M_list", default)]
    pub m_list: Vec<usize>,
    #[serde(rename = "N_list", default)]
    pub n_list: Vec<usize>,
    #[serde(default)]
    pub lambda: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    pub replicas: u64,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    /// Replica-bootstrap resamples for the exponent confidence band.
    #[serde(default = "default_bootstrap")]
    pub bootstrap_resamples: usize,
    /// Compare the chain against dense inversion (decay only).
    #[serde(default)]
    pub cross_check: bool,
}

impl ExperimentConfig {
    /// Config with all defaults for `kind`.
    pub fn new(kind: ExperimentKind, replicas: u64) -> Self {
        let mut cfg = Self {
            kind,
            m_list: Vec::new(),
            n_list: Vec::new(),
            lambda: 0.0,
            epsilon: default_epsilon(),
            replicas,
            master_seed: 0,
            output_dir: default_output_dir(),
            bootstrap_resamples: default_bootstrap(),
            cross_check: false,
        };
        cfg.fill_defaults();
        cfg
    }

    /// Empty `M_list`/`N_list` take the per-kind defaults.
    pub fn fill_defaults(&mut self) {
        if self.m_list.is_empty() {
            self.m_list = self.kind.default_m_list();
        }
        if self.n_list.is_empty() {
            self.n_list = self.kind.default_n_list();
        }
    }

    pub fn validate(&self) -> Result<()> {
        let err = |msg: String| Err(BandError::Config(msg));
        if self.replicas < 1 {
            return err("field `replicas` must be at least 1".into());
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return err(format!(
                "field `epsilon` must lie in (0,1), got {}",
                self.epsilon
            ));
        }
        if !self.lambda.is_finite() || self.lambda.abs() >= 1.0 / self.epsilon {
            return err(format!(
                "field `lambda`: need |lambda| < 1/epsilon = {}, got {}",
                1.0 / self.epsilon,
                self.lambda
            ));
        }
        if self.m_list.is_empty() || self.m_list.contains(&0) {
            return err("field `M_list` must be a nonempty list of positive integers".into());
        }
        if self.n_list.is_empty() || self.n_list.contains(&0) {
            return err("field `N_list` must be a nonempty list of positive integers".into());
        }
        let min_n = self.n_list.iter().copied().min().unwrap_or(0);
        match self.kind {
            ExperimentKind::Fluctuations
            | ExperimentKind::ConjectureScan
            | ExperimentKind::Lemma22
                if min_n < 4 =>
            {
                return err("field `N_list`: the mid-chain index needs N >= 4".into());
            }
            ExperimentKind::Decomposition if min_n < 3 => {
                return err("field `N_list`: the decomposition needs N >= 3".into());
            }
            ExperimentKind::Decay if self.n_list.len() < 2 => {
                return err("field `N_list`: the decay fit needs at least two N values".into());
            }
            _ => {}
        }
        if self.kind == ExperimentKind::ConjectureScan {
            let mut ms = self.m_list.clone();
            ms.sort_unstable();
            ms.dedup();
            if ms.len() < 3 {
                return err("field `M_list`: the exponent scan needs at least 3 distinct M".into());
            }
            if self.lambda.abs() >= self.epsilon {
                return err(format!(
                    "field `lambda`: the exponent scan needs |lambda| < epsilon = {}",
                    self.epsilon
                ));
            }
            if self.replicas < 2 {
                return err("field `replicas`: the exponent scan needs at least 2 replicas".into());
            }
        }
        if self.kind == ExperimentKind::Decomposition && self.replicas < 4 {
            return err("field `replicas`: the variance estimate needs at least 4 replicas".into());
        }
        if self.cross_check {
            let max_m = self.m_list.iter().max().copied().unwrap_or(0);
            let max_n = self.n_list.iter().max().copied().unwrap_or(0);
            if max_m * max_n > DENSE_ORACLE_LIMIT {
                return err(format!(
                    "field `cross_check`: N*M = {} exceeds the dense limit {DENSE_ORACLE_LIMIT}",
                    max_m * max_n
                ));
            }
        }
        Ok(())
    }

    /// Parses and validates a JSON document; defaults are filled in.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let mut cfg: Self =
            serde_json::from_str(text).map_err(|e| BandError::Config(e.to_string()))?;
        cfg.fill_defaults();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_replicas_names_field() {
        let e = ExperimentConfig::from_json_str(r#"{"kind": "decay"}"#).unwrap_err();
        assert!(matches!(e, BandError::Config(_)));
        assert!(e.to_string().contains("replicas"), "{e}");
    }

    #[test]
    fn lambda_hypothesis() {
        let text = r#"{"kind": "decay", "replicas": 3, "lambda": 5.0, "epsilon": 0.25}"#;
        let e = ExperimentConfig::from_json_str(text).unwrap_err();
        assert!(e.to_string().contains("lambda"), "{e}");
        let ok = r#"{"kind": "decay", "replicas": 3, "lambda": 3.9, "epsilon": 0.25}"#;
        assert!(ExperimentConfig::from_json_str(ok).is_ok());
    }

    #[test]
    fn round_trip() {
        let mut cfg = ExperimentConfig::new(ExperimentKind::ConjectureScan, 10);
        cfg.lambda = 0.1;
        cfg.master_seed = u64::MAX - 3;
        assert_eq!(
            ExperimentConfig::from_json_str(&cfg.to_json()).unwrap(),
            cfg
        );
    }

    #[test]
    fn unknown_field_rejected_with_position() {
        let e =
            ExperimentConfig::from_json_str("{\"kind\": \"decay\",\n \"replica\": 3}").unwrap_err();
        assert!(e.to_string().contains("line 2"), "{e}");
    }
}
