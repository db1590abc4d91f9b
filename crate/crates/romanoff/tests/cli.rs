//! End-to-end checks of the `romanoff` binary: flag parsing, config files
//! with flag overrides, report files, error reporting, and the order-table
//! cache.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_romanoff"))
}

#[test]
fn density_run_writes_both_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("density");
    let status = bin()
        .args([
            "--experiment",
            "romanoff-density",
            "--spec-a",
            "primes",
            "--spec-b",
            "kind=power-poly;a=2;f=0,1",
            "--x",
            "2000",
            "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let csv = std::fs::read_to_string(out.with_extension("csv")).unwrap();
    assert!(csv.contains("# experiment = romanoff-density"));
    assert!(csv.contains("c1,threshold,count_above"));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.with_extension("json")).unwrap())
            .unwrap();
    assert_eq!(json["experiment"], "romanoff-density");
    assert!(json["summary"]["s1"].is_u64());
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    std::fs::write(
        &conf,
        "experiment = s2s-progression\nx = 100\nk = 4\nl = 1\nformat = json\n",
    )
    .unwrap();
    let out = dir.path().join("prog");
    // Flag overrides x from the file.
    let status = bin()
        .args(["--config"])
        .arg(&conf)
        .args(["--x", "1000", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    assert!(!out.with_extension("csv").exists(), "format=json writes no csv");
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.with_extension("json")).unwrap())
            .unwrap();
    assert_eq!(json["summary"]["x"], 1000);
}

#[test]
fn unknown_experiment_exits_with_usage_error() {
    let output = bin().args(["--experiment", "frobnicate"]).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    let err = String::from_utf8_lossy(&output.stderr);
    assert!(err.contains("unknown experiment"), "{err}");
}

#[test]
fn invalid_polynomial_is_rejected_with_diagnostic() {
    let output = bin()
        .args([
            "--experiment",
            "romanoff-density",
            "--spec-a",
            "primes",
            "--spec-b",
            "kind=power-poly;a=2;f=1,-1", // negative leading coefficient
            "--x",
            "100",
        ])
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
    let err = String::from_utf8_lossy(&output.stderr);
    assert!(err.contains("leading coefficient"), "{err}");
}

#[test]
fn sieve_exhaustion_reports_the_needed_limit() {
    let dir = tempfile::tempdir().unwrap();
    let output = bin()
        .args([
            "--experiment",
            "david-wu",
            "--curve",
            "a1b1",
            "--modulus",
            "3",
            "--x",
            "5000",
            "--limit",
            "1000",
            "--out",
        ])
        .arg(dir.path().join("dw"))
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    let err = String::from_utf8_lossy(&output.stderr);
    assert!(err.contains("5000"), "needed limit missing from: {err}");
}

#[test]
fn order_cache_round_trips_through_env() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let run = |out: &Path| {
        let status = bin()
            .env(romanoff::experiment::CACHE_DIR_ENV, &cache)
            .args([
                "--experiment",
                "hasse-scan",
                "--curve",
                "a1b1",
                "--limit",
                "3000",
                "--out",
            ])
            .arg(out)
            .status()
            .unwrap();
        assert!(status.success());
    };
    run(&dir.path().join("first"));
    let cached: Vec<_> = std::fs::read_dir(&cache).unwrap().collect();
    assert_eq!(cached.len(), 1, "one order table cached");
    // Second run consumes the cache and reproduces the same report.
    run(&dir.path().join("second"));
    let a = std::fs::read(dir.path().join("first.csv")).unwrap();
    let b = std::fs::read(dir.path().join("second.csv")).unwrap();
    assert_eq!(a, b);
}
