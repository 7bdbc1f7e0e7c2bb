use bandlab::experiments::{ExperimentConfig, ExperimentKind, ResultRecord};
use bandlab::io::*;
use std::fs;
use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bandlab"))
}

fn parse_row(line: &str) -> Vec<String> {
    line.split(',').map(str::to_string).collect()
}

#[test]
fn empty_output_is_header_only() {
    assert_eq!(csv_text(&[]), format!("{CSV_HEADER}\n"));
}

#[test]
fn rows_in_replica_order_with_lf() {
    let mut a = ResultRecord::replica("sample", 0, 11, 4, 4, 0);
    a.push("x", 1.5);
    let mut b = ResultRecord::replica("sample", 1, 12, 4, 4, 2);
    b.push("x", -0.25);
    let text = csv_text(&[a, b]);
    assert!(!text.contains('\r'));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(parse_row(lines[1])[1], "0");
    assert_eq!(parse_row(lines[2])[1], "1");
    assert_eq!(parse_row(lines[2])[7], "2");
    let summary = ResultRecord::summary("sample", 4, 4, 0);
    let mut s = summary;
    s.push("y", 3.0);
    let row = parse_row(csv_text(&[s]).lines().nth(1).unwrap());
    assert_eq!((row[1].as_str(), row[2].as_str()), ("", ""));
}

#[test]
fn values_round_trip_exactly() {
    let values = [
        0.1,
        1.0 / 3.0,
        -2.5e-300,
        6.02214076e23,
        f64::MIN_POSITIVE,
        0.0,
    ];
    let mut r = ResultRecord::replica("x", 0, 0, 1, 1, 0);
    for (i, v) in values.iter().enumerate() {
        r.push(format!("v{i}"), *v);
    }
    let text = csv_text(&[r]);
    let parsed: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| parse_row(l)[6].parse().unwrap())
        .collect();
    assert_eq!(parsed, values);
}

#[test]
fn atomic_write_replaces_without_leftovers() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.csv");
    write_atomic(&path, b"first").unwrap();
    write_atomic(&path, b"second").unwrap();
    assert_eq!(fs::read(&path).unwrap(), b"second");
    let names: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert_eq!(names.len(), 1);
}

#[test]
fn manifest_describes_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = ExperimentConfig::new(ExperimentKind::Lemma22, 20);
    cfg.m_list = vec![4];
    cfg.master_seed = 99;
    cfg.output_dir = dir.path().to_path_buf();
    let (_, manifest) = run_to_dir(&cfg, 1).unwrap();
    let back = read_manifest(&dir.path().join(MANIFEST_FILE)).unwrap();
    assert_eq!(back, manifest);
    assert_eq!(back.master_seed, 99);
    assert_eq!(back.config, cfg);
    assert_eq!(back.files.len(), 2);
    for f in &back.files {
        assert!(dir.path().join(f).is_file(), "{f}");
    }
}

#[test]
fn config_file_round_trip() {
    let mut cfg = ExperimentConfig::new(ExperimentKind::Decay, 30);
    cfg.m_list = vec![2, 4];
    cfg.n_list = vec![10, 20, 30];
    cfg.lambda = 0.1;
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.json");
    fs::write(&path, cfg.to_json()).unwrap();
    let back = parse_config(ExperimentKind::Decay, Some(&path), &Overrides::default()).unwrap();
    assert_eq!(back, cfg);
    // a file for one experiment cannot drive another
    assert!(parse_config(ExperimentKind::Lemma22, Some(&path), &Overrides::default()).is_err());
}

#[test]
fn overrides_take_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.json");
    fs::write(
        &path,
        r#"{"kind": "lemma22", "replicas": 10, "master_seed": 1}"#,
    )
    .unwrap();
    let ov = Overrides {
        seed: Some(5),
        replicas: Some(7),
        ..Overrides::default()
    };
    let cfg = parse_config(ExperimentKind::Lemma22, Some(&path), &ov).unwrap();
    assert_eq!((cfg.master_seed, cfg.replicas), (5, 7));
}

fn stderr_of(out: &std::process::Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn cli_missing_replicas_is_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["lemma22", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr_of(&out).starts_with("error[config]"),
        "{}",
        stderr_of(&out)
    );
}

#[test]
fn cli_lambda_outside_window_is_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["conjecture", "--replicas", "10", "--lambda", "5"])
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("lambda"), "{}", stderr_of(&out));
}

#[test]
fn cli_malformed_config_reports_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{\n  \"replicas\": 10,\n  oops\n}").unwrap();
    let out = bin()
        .args(["lemma22", "--config"])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("line 3"), "{}", stderr_of(&out));
}

fn run_cli(dir: &Path, workers: &str) {
    let out = bin()
        .args([
            "fluctuations",
            "--replicas",
            "16",
            "--seed",
            "3",
            "--m",
            "4,8",
            "--workers",
            workers,
        ])
        .arg("--out")
        .arg(dir)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr_of(&out));
}

#[test]
fn cli_csv_bytes_independent_of_workers() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run_cli(a.path(), "1");
    run_cli(b.path(), "2");
    for f in ["fluctuations.csv", "fluctuations_summary.csv"] {
        assert_eq!(
            fs::read(a.path().join(f)).unwrap(),
            fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
    assert!(a.path().join(MANIFEST_FILE).is_file());
}

#[test]
fn cli_selftest_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .arg("selftest")
        .arg("--out")
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr_of(&out));
}
