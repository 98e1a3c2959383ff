use std::path::Path;
use std::process::{Command, Output};

fn satotate(dir: &Path, args: &[&str], config: &str) -> Output {
    let cfg = dir.join("config.json");
    std::fs::write(&cfg, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_satotate"))
        .args(args)
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.join("out"))
        .output()
        .unwrap()
}

fn write_specs(dir: &Path) {
    std::fs::write(dir.join("su2.json"), r#"{"m": 1, "gamma": {"cyclic": 1}, "a": 1}"#).unwrap();
    // twist i^k on component k; Z[i] elements in the power basis (1, i)
    let unit = |k: usize| {
        let (x, y) = [(1, 0), (0, 1), (-1, 0), (0, -1)][k];
        format!(r#"[[[{{"order": 4, "numerators": [{x}, {y}], "denominators": [1, 1]}}]]]"#)
    };
    let twists: Vec<String> = (0..4).map(unit).collect();
    std::fs::write(
        dir.join("mu4.json"),
        format!(
            r#"{{"m": 1, "gamma": {{"cyclic": 4}}, "a": 2, "twists": [{}]}}"#,
            twists.join(", ")
        ),
    )
    .unwrap();
}

#[test]
fn moments_succeeds_with_exit_0() {
    let dir = tempfile::tempdir().unwrap();
    write_specs(dir.path());
    let out = satotate(
        dir.path(),
        &["moments"],
        r#"{"schema_version": 1, "spec_path": "su2.json", "n_max": 4}"#,
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("out/moments.csv")).unwrap();
    assert!(csv.lines().any(|l| l.starts_with("1,all,0,1,")));
    assert!(csv.lines().any(|l| l.starts_with("4,all,2,1,")));
}

#[test]
fn invalid_spec_exits_2_with_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), "{\n  \"m\": 1,\n  \"gamma\": \n}").unwrap();
    let out = satotate(
        dir.path(),
        &["moments"],
        r#"{"schema_version": 1, "spec_path": "bad.json"}"#,
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn unknown_config_key_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    write_specs(dir.path());
    let out = satotate(
        dir.path(),
        &["moments"],
        r#"{"schema_version": 1, "spec_path": "su2.json", "nmax": 4}"#,
    );
    assert_eq!(out.status.code(), Some(2));
    let out = satotate(
        dir.path(),
        &["moments"],
        r#"{"schema_version": 7, "spec_path": "su2.json"}"#,
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sampling_without_seed_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    write_specs(dir.path());
    let out = satotate(
        dir.path(),
        &["sample"],
        r#"{"schema_version": 1, "spec_path": "su2.json", "mc_samples": 10}"#,
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mismatched_group_fails_test_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    write_specs(dir.path());
    // 37a has no inner twists, so its traces are not distributed like SU(2) x mu_4
    let out = satotate(
        dir.path(),
        &["test"],
        r#"{"schema_version": 1, "spec_path": "mu4.json", "seed": 1, "mc_samples": 100000,
            "data": {"curve": {"a": [0, 0, 1, -1, 0]}}, "prime_bound": 20000,
            "class_map": {"modulus": 5, "classes": {"1": 0, "2": 1, "4": 2, "3": 3}}}"#,
    );
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
    let report = std::fs::read_to_string(dir.path().join("out/report.json")).unwrap();
    assert!(report.contains("\"passed\": false"));
}

#[test]
fn matching_curve_passes_test_with_exit_0() {
    let dir = tempfile::tempdir().unwrap();
    write_specs(dir.path());
    let out = satotate(
        dir.path(),
        &["test"],
        r#"{"schema_version": 1, "spec_path": "su2.json", "data": {"curve": {"a": [0, 0, 1, -1, 0]}}, "prime_bound": 20000}"#,
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["report.json", "report.txt", "histogram.csv"] {
        assert!(dir.path().join("out").join(f).exists(), "{f}");
    }
}

#[test]
fn ec_trace_writes_traces_and_bad_primes() {
    let dir = tempfile::tempdir().unwrap();
    write_specs(dir.path());
    let out = satotate(
        dir.path(),
        &["ec-trace"],
        r#"{"schema_version": 1, "spec_path": "su2.json", "data": {"curve": {"a": [0, 0, 1, -1, 0]}}, "prime_bound": 40}"#,
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let bad = std::fs::read_to_string(dir.path().join("out/bad_primes.txt")).unwrap();
    assert_eq!(bad.trim(), "37");
    let traces = std::fs::read_to_string(dir.path().join("out/traces.csv")).unwrap();
    assert!(traces.contains("11,-5"));
}
