use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dispersmooth"))
        .args(args)
        .env("DISPERSMOOTH_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("run.toml");
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const SIMULATE: &str = "experiment = \"simulate\"\n[grid]\nn_per_dim = 16\n[integrator]\nt_end = 0.1\n";

#[test]
fn simulate_succeeds_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SIMULATE);
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        let o = run(&["simulate", "--config", &cfg, "--seed", "5", "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for name in ["timeseries.csv", "final.zkgs"] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name}");
    }
    assert!(a.join("manifest.json").exists());
}

#[test]
fn seed_changes_the_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SIMULATE);
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    run(&["simulate", "--config", &cfg, "--seed", "1", "--out", a.to_str().unwrap(), "--quiet"]);
    run(&["simulate", "--config", &cfg, "--seed", "2", "--out", b.to_str().unwrap(), "--quiet"]);
    assert_ne!(fs::read(a.join("final.zkgs")).unwrap(), fs::read(b.join("final.zkgs")).unwrap());
}

#[test]
fn quiet_prints_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let o = run(&["resonance-geometry", "--out", out.to_str().unwrap(), "--quiet"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    assert!(out.join("shell.csv").exists());
    assert!(out.join("lemma.csv").exists());

    let o = run(&["resonance-geometry", "--out", out.to_str().unwrap()]);
    assert!(!o.stdout.is_empty());
}

#[test]
fn invalid_config_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "experiment = \"simulate\"\n[system]\ns = -1.0\n");
    let o = run(&["simulate", "--config", &cfg, "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("s > -1/4"));
}

#[test]
fn mismatched_experiment_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SIMULATE);
    let o = run(&["attractor", "--config", &cfg, "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_config_exits_with_four() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.toml");
    let o = run(&["simulate", "--config", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn bad_thread_count_is_rejected() {
    let o = Command::new(env!("CARGO_BIN_EXE_dispersmooth"))
        .args(["resonance-geometry", "--quiet"])
        .env("DISPERSMOOTH_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
