//! Config parsing with flag overrides, long-format CSV results and the
//! run manifest.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::{SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{BandError, Result};
use crate::experiments::{
    run_experiment, Exclusions, ExperimentConfig, ExperimentKind, ExperimentOutput, ResultRecord,
};

/// Column order of every results file.
pub const CSV_HEADER: &str = "experiment,replica,seed,M,N,stat_name,stat_value,flags";

pub const MANIFEST_FILE: &str = "manifest.json";

/// Command-line values that take precedence over the config file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub replicas: Option<u64>,
    pub out: Option<PathBuf>,
    pub m_list: Option<Vec<usize>>,
    pub n_list: Option<Vec<usize>>,
    pub lambda: Option<f64>,
    pub epsilon: Option<f64>,
}

/// Builds the config for `kind` from an optional JSON file plus flags.
/// A `kind` in the file must agree with the subcommand.
pub fn parse_config(
    kind: ExperimentKind,
    path: Option<&Path>,
    overrides: &Overrides,
) -> Result<ExperimentConfig> {
    let mut doc = match path {
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| BandError::Config(format!("cannot read {}: {e}", p.display())))?;
            match serde_json::from_str::<Value>(&text)
                .map_err(|e| BandError::Config(format!("{}: {e}", p.display())))?
            {
                Value::Object(map) => map,
                _ => {
                    return Err(BandError::Config(format!(
                        "{}: top level must be an object",
                        p.display()
                    )))
                }
            }
        }
        None => Map::new(),
    };
    let kind_value = serde_json::to_value(kind)?;
    match doc.get("kind") {
        Some(k) if *k != kind_value => {
            return Err(BandError::Config(format!(
                "field `kind`: file says {k}, subcommand `{}` runs {kind_value}",
                kind.subcommand()
            )))
        }
        _ => {
            doc.insert("kind".into(), kind_value);
        }
    }
    let mut set = |key: &str, v: Option<Value>| {
        if let Some(v) = v {
            doc.insert(key.into(), v);
        }
    };
    set("master_seed", overrides.seed.map(Value::from));
    set("replicas", overrides.replicas.map(Value::from));
    set(
        "output_dir",
        overrides
            .out
            .as_ref()
            .map(|p| Value::from(p.to_string_lossy().into_owned())),
    );
    set("M_list", overrides.m_list.clone().map(Value::from));
    set("N_list", overrides.n_list.clone().map(Value::from));
    set("lambda", overrides.lambda.map(Value::from));
    set("epsilon", overrides.epsilon.map(Value::from));
    if kind == ExperimentKind::Selftest {
        doc.entry("replicas").or_insert(Value::from(1));
    }
    let mut cfg: ExperimentConfig =
        serde_json::from_value(Value::Object(doc)).map_err(|e| BandError::Config(e.to_string()))?;
    cfg.fill_defaults();
    cfg.validate()?;
    Ok(cfg)
}

fn format_row(r: &ResultRecord, name: &str, value: f64) -> String {
    let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
    format!(
        "{},{},{},{},{},{},{:.16e},{}\n",
        r.experiment,
        opt(r.replica),
        opt(r.seed),
        r.m,
        r.n,
        name,
        value,
        r.flags
    )
}

/// Long-format CSV text: one row per statistic, records in the given order.
pub fn csv_text(records: &[ResultRecord]) -> String {
    let mut out = String::with_capacity(64 * records.len() + CSV_HEADER.len() + 1);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for r in records {
        for (name, value) in &r.stats {
            out.push_str(&format_row(r, name, *value));
        }
    }
    out
}

/// Writes `bytes` to a sibling temporary file and renames it over `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| BandError::io(path, std::io::Error::other("no file name")))?;
    let tmp = path.with_file_name(format!(".{}.tmp", name.to_string_lossy()));
    let mut f = fs::File::create(&tmp).map_err(|e| BandError::io(&tmp, e))?;
    f.write_all(bytes).map_err(|e| BandError::io(&tmp, e))?;
    f.sync_all().map_err(|e| BandError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| BandError::io(path, e))
}

/// Writes `<experiment>.csv` (replica rows) and `<experiment>_summary.csv`
/// into `dir`, returning both paths.
pub fn write_results(output: &ExperimentOutput, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| BandError::io(dir, e))?;
    let mut paths = Vec::with_capacity(2);
    for (suffix, records) in [("", &output.records), ("_summary", &output.summary)] {
        let path = dir.join(format!("{}{suffix}.csv", output.experiment));
        write_atomic(&path, csv_text(records).as_bytes())?;
        paths.push(path);
    }
    Ok(paths)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub master_seed: u64,
    pub started: String,
    pub finished: String,
    pub config: ExperimentConfig,
    /// File names relative to the output directory.
    pub files: Vec<String>,
    pub exclusions: Vec<Exclusions>,
}

pub fn write_manifest(manifest: &Manifest, dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| BandError::io(dir, e))?;
    let path = dir.join(MANIFEST_FILE);
    let mut text = serde_json::to_string_pretty(manifest)?;
    text.push('\n');
    write_atomic(&path, text.as_bytes())?;
    Ok(path)
}

pub fn read_manifest(path: &Path) -> Result<Manifest> {
    let text = fs::read_to_string(path).map_err(|e| BandError::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

/// Runs `cfg`, writes its CSVs and the manifest into `cfg.output_dir`.
pub fn run_to_dir(cfg: &ExperimentConfig, workers: usize) -> Result<(ExperimentOutput, Manifest)> {
    let started = now();
    let output = run_experiment(cfg, workers)?;
    let paths = write_results(&output, &cfg.output_dir)?;
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        master_seed: cfg.master_seed,
        started,
        finished: now(),
        config: cfg.clone(),
        files: paths
            .iter()
            .filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
            .collect(),
        exclusions: output.exclusions.clone(),
    };
    write_manifest(&manifest, &cfg.output_dir)?;
    Ok((output, manifest))
}
