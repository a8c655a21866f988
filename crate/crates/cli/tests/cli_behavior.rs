//! Black-box tests of the `anisohardy` binary: exit codes, determinism,
//! plotting, and the suite catalog.

use std::path::Path;
use std::process::{Command, Output};

use tempfile::tempdir;

const BIN: &str = env!("CARGO_BIN_EXE_anisohardy");

fn run(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.args(args);
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

const FAST_CONFIG: &str = r#"
suite = "identities"
seed = 7

[gauge]
family = "euclidean"
dimension = 2
"#;

#[test]
fn list_names_every_suite() {
    let out = run(&["list"], &[]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in [
        "identities",
        "subcritical",
        "critical",
        "geometric",
        "weighted",
        "uncertainty",
        "sharpness",
        "transform",
        "all",
    ] {
        assert!(text.contains(name), "catalog is missing {name}");
    }
}

#[test]
fn porcelain_list_is_tab_separated() {
    let out = run(&["list", "--porcelain"], &[]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 9);
    for line in &lines {
        assert_eq!(line.split('\t').count(), 3, "bad porcelain line: {line}");
    }
    assert!(lines[0].starts_with("identities\t"));
    assert!(lines[8].starts_with("all\t"));
}

#[test]
fn identical_runs_are_byte_identical_even_across_thread_counts() {
    let dir = tempdir().unwrap();
    let cfg = write_config(dir.path(), "cfg.toml", FAST_CONFIG);
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    let ra = run(
        &["run", &cfg, "--out", out_a.to_str().unwrap()],
        &[("ANISOHARDY_THREADS", "1")],
    );
    let rb = run(
        &["run", &cfg, "--out", out_b.to_str().unwrap()],
        &[("ANISOHARDY_THREADS", "2")],
    );
    assert!(ra.status.success(), "{}", String::from_utf8_lossy(&ra.stderr));
    assert!(rb.status.success());
    let csv_a = std::fs::read(out_a.join("report.csv")).unwrap();
    let csv_b = std::fs::read(out_b.join("report.csv")).unwrap();
    assert_eq!(csv_a, csv_b);
    assert!(!csv_a.is_empty());
}

#[test]
fn seed_override_changes_the_report() {
    let dir = tempdir().unwrap();
    let cfg = write_config(dir.path(), "cfg.toml", FAST_CONFIG);
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    assert!(run(&["run", &cfg, "--out", out_a.to_str().unwrap()], &[])
        .status
        .success());
    assert!(run(
        &["run", &cfg, "--out", out_b.to_str().unwrap(), "--seed", "8"],
        &[]
    )
    .status
    .success());
    let csv_a = std::fs::read(out_a.join("report.csv")).unwrap();
    let csv_b = std::fs::read(out_b.join("report.csv")).unwrap();
    assert_ne!(csv_a, csv_b);
}

#[test]
fn failing_checks_exit_one() {
    // A single sweep point far from the limit cannot sit within the final
    // tolerance of the sharp constant.
    let body = r#"
suite = "sharpness"

[gauge]
family = "euclidean"
dimension = 2

[params]
interior_fractions = [0.6]
boundary_fractions = [1.4]
"#;
    let dir = tempdir().unwrap();
    let cfg = write_config(dir.path(), "cfg.toml", body);
    let out = run(
        &["run", &cfg, "--out", dir.path().join("o").to_str().unwrap()],
        &[],
    );
    assert_eq!(out.status.code(), Some(1));
    let csv = std::fs::read_to_string(dir.path().join("o/report.csv")).unwrap();
    assert!(csv.contains(",false,"));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("failed:"));
}

#[test]
fn configuration_errors_exit_two() {
    let dir = tempdir().unwrap();
    // Missing file.
    let out = run(
        &["run", dir.path().join("absent.toml").to_str().unwrap()],
        &[],
    );
    assert_eq!(out.status.code(), Some(2));

    // Unknown key.
    let bad = write_config(dir.path(), "bad.toml", "bogus = 1\n[gauge]\nfamily = \"euclidean\"\ndimension = 2\n");
    let out = run(&["run", &bad], &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("error:"));

    // Unknown suite via flag.
    let ok = write_config(dir.path(), "ok.toml", FAST_CONFIG);
    let out = run(&["run", &ok, "--suite", "bogus"], &[]);
    assert_eq!(out.status.code(), Some(2));

    // Bad thread count.
    let out = run(&["run", &ok], &[("ANISOHARDY_THREADS", "zero")]);
    assert_eq!(out.status.code(), Some(2));

    // Unknown flag: usage error from the argument parser.
    let out = run(&["list", "--nonsense"], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn plots_are_written_only_on_request() {
    let body = r#"
suite = "sharpness"

[gauge]
family = "euclidean"
dimension = 2
"#;
    let dir = tempdir().unwrap();
    let cfg = write_config(dir.path(), "cfg.toml", body);
    let plain = dir.path().join("plain");
    let plotted = dir.path().join("plotted");
    assert!(run(&["run", &cfg, "--out", plain.to_str().unwrap()], &[])
        .status
        .success());
    assert!(run(
        &["run", &cfg, "--out", plotted.to_str().unwrap(), "--plots"],
        &[]
    )
    .status
    .success());

    let svgs = |p: &Path| -> Vec<String> {
        let mut v: Vec<String> = std::fs::read_dir(p)
            .unwrap()
            .map(|e| e.unwrap().file_name().into_string().unwrap())
            .filter(|n| n.ends_with(".svg"))
            .collect();
        v.sort();
        v
    };
    assert!(svgs(&plain).is_empty());
    assert_eq!(
        svgs(&plotted),
        vec![
            "sweep-critical-log-power.svg",
            "sweep-halfspace-distance.svg",
            "sweep-subcritical-power.svg"
        ]
    );
    let doc = std::fs::read_to_string(plotted.join("sweep-subcritical-power.svg")).unwrap();
    assert!(doc.contains("sharp constant"));
}
