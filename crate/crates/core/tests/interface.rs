//! End-to-end checks of the CLI surface: preset runs, config runs, CSV
//! shape, and error exit codes.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nclt"))
}

fn temp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("nclt-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn preset_subcommand_writes_csv() {
    let out = temp_path("preset.csv");
    let status = bin()
        .args([
            "preset",
            "cor38",
            "--mode",
            "boolean",
            "--n-ladder",
            "100,1000",
            "--order",
            "12",
            "--out",
        ])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let csv = std::fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "experiment,n,metric,value,target,tolerance,pass"
    );
    let body: Vec<&str> = lines.collect();
    assert!(body.iter().all(|l| l.starts_with("cor38_boolean,")));
    assert!(body.iter().any(|l| l.contains(",moment_dist,")));
    assert!(body.iter().any(|l| l.contains(",sigma_fourier_gap,")));
    assert!(body.iter().all(|l| l.ends_with(",true") || l.ends_with(",false")));
    // Sorted by (experiment, n, metric).
    let keys: Vec<(String, u64, String)> = body
        .iter()
        .map(|l| {
            let mut it = l.split(',');
            (
                it.next().unwrap().to_string(),
                it.next().unwrap().parse().unwrap(),
                it.next().unwrap().to_string(),
            )
        })
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    std::fs::remove_file(&out).ok();
}

#[test]
fn run_subcommand_executes_config() {
    let cfg = temp_path("cfg.json");
    let out = temp_path("run.csv");
    std::fs::write(
        &cfg,
        r#"{
            "array": {"preset": "poisson_R", "t": 1.0},
            "mode": "classical",
            "ladder": [100, 1000],
            "tolerances": {"final_dist": 0.05}
        }"#,
    )
    .unwrap();
    let status = bin()
        .args(["run", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.contains("poisson_R_classical,1000,charfn_gap,"));
    assert!(!csv.contains(",false"));
    std::fs::remove_file(&cfg).ok();
    std::fs::remove_file(&out).ok();
}

#[test]
fn unknown_preset_fails_with_diagnostic() {
    let out = temp_path("unused.csv");
    let output = bin()
        .args(["preset", "cor99", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(!output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("unknown preset"), "stderr: {stderr}");
}

#[test]
fn malformed_config_fails() {
    let cfg = temp_path("bad.json");
    let out = temp_path("bad.csv");
    std::fs::write(&cfg, "{ not json").unwrap();
    let status = bin()
        .args(["run", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(!status.success());
    std::fs::remove_file(&cfg).ok();
}
