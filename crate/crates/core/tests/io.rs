use dispersmooth::dissipative::DampedState;
use dispersmooth::evolution::{System, SystemState};
use dispersmooth::io::{
    load_checkpoint, load_config, load_config_str, run_experiment, save_checkpoint, write_outputs,
    Checkpoint, Experiment, RunConfig, FORMAT_VERSION,
};
use dispersmooth::spectral::{make_grid, random_real_sobolev_field, random_sobolev_field};
use dispersmooth::Error;
use proptest::prelude::*;

fn state(seed: u64) -> SystemState {
    let g = make_grid(2, 8, 1.5).unwrap();
    SystemState::new(
        System::Zakharov,
        random_sobolev_field(&g, 0.0, seed),
        random_sobolev_field(&g, 0.5, seed + 1),
        random_sobolev_field(&g, 0.5, seed + 2),
        0.3125,
    )
    .unwrap()
}

#[test]
fn defaults_parse_from_experiment_alone() {
    let cfg = load_config_str("experiment = \"simulate\"").unwrap();
    let mut expect = RunConfig::default();
    expect.experiment = Some(Experiment::Simulate);
    assert_eq!(cfg, expect);
    assert_eq!(cfg.grid.d, 2);
    assert_eq!(cfg.grid.n_per_dim, 64);
}

#[test]
fn toml_roundtrip() {
    let mut cfg = RunConfig::default();
    cfg.experiment = Some(Experiment::Attractor);
    cfg.seed = 9;
    cfg.damping.energies = vec![2.0, 5.0];
    let back = RunConfig::parse(&cfg.to_toml()).unwrap();
    assert_eq!(back, cfg);
}

#[test]
fn inadmissible_regularity_is_rejected() {
    let err = load_config_str("experiment = \"simulate\"\n[system]\ns = -1.0\nr = 0.5\n").unwrap_err();
    assert!(err.to_string().contains("s > -1/4"), "{err}");
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn unknown_key_is_named_with_its_line() {
    let err = load_config_str("experiment = \"simulate\"\n[grid]\nd = 2\nfoo = 1\n").unwrap_err();
    let msg = err.to_string();
    assert!(matches!(err, Error::Config(_)));
    assert!(msg.contains("foo"), "{msg}");
    assert!(msg.contains("line 4"), "{msg}");
}

#[test]
fn missing_file_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let err = load_config(&dir.path().join("absent.toml")).unwrap_err();
    assert!(matches!(err, Error::Io { .. }), "{err:?}");
    assert_eq!(err.exit_code(), 4);
}

#[test]
fn missing_experiment_is_a_config_error() {
    assert!(matches!(load_config_str("seed = 1"), Err(Error::Config(_))));
}

#[test]
fn checkpoint_roundtrip_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.zkgs");
    let st = state(1);
    save_checkpoint(&st, &path).unwrap();
    assert_eq!(load_checkpoint(&path).unwrap(), st);

    let g = make_grid(1, 16, 1.0).unwrap();
    let d = DampedState::new(
        random_sobolev_field(&g, 1.0, 4),
        random_real_sobolev_field(&g, 1.0, 5),
        random_real_sobolev_field(&g, 0.0, 6),
        2.5,
    )
    .unwrap();
    let bytes = Checkpoint::from_damped(&d).to_bytes().unwrap();
    let back = Checkpoint::from_bytes(&bytes).unwrap();
    assert!(back.clone().into_state().is_err());
    assert_eq!(back.into_damped().unwrap(), d);
}

#[test]
fn corrupt_checkpoints_are_format_errors() {
    let bytes = Checkpoint::from_state(&state(2)).to_bytes().unwrap();

    let mut bad = bytes.clone();
    bad[0] = b'X';
    let err = Checkpoint::from_bytes(&bad).unwrap_err();
    assert!(matches!(err, Error::Format(_)));
    assert_eq!(err.exit_code(), 4);

    let mut bad = bytes.clone();
    bad[4..8].copy_from_slice(&(FORMAT_VERSION + 1).to_le_bytes());
    assert!(matches!(Checkpoint::from_bytes(&bad), Err(Error::Format(m)) if m.contains("version")));

    assert!(matches!(Checkpoint::from_bytes(&bytes[..bytes.len() - 1]), Err(Error::Format(_))));
    assert!(matches!(Checkpoint::from_bytes(&bytes[..10]), Err(Error::Format(_))));
}

#[test]
fn simulate_writes_timeseries_and_checkpoint() {
    let mut cfg = RunConfig::default();
    cfg.experiment = Some(Experiment::Simulate);
    cfg.grid.n_per_dim = 16;
    cfg.integrator.t_end = 0.1;
    let report = run_experiment(&cfg).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let paths = write_outputs(&report, &cfg, dir.path(), 0.0).unwrap();
    let names: Vec<String> = paths
        .iter()
        .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
        .collect();
    for expect in ["timeseries.csv", "final.zkgs", "manifest.json"] {
        assert!(names.iter().any(|n| n == expect), "{names:?}");
    }
    let csv = std::fs::read_to_string(dir.path().join("timeseries.csv")).unwrap();
    assert_eq!(
        csv.lines().next().unwrap(),
        "step,t,mass,hamiltonian,Hs_u,Hr_wplus,Hr_wminus"
    );
    // Steps 0, 10 with dt = 1e-2.
    assert_eq!(csv.lines().count(), 3);
    let last = load_checkpoint(&dir.path().join("final.zkgs")).unwrap();
    assert!((last.t - 0.1).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn checkpoint_bytes_roundtrip(seed in any::<u64>()) {
        let st = state(seed);
        let bytes = Checkpoint::from_state(&st).to_bytes().unwrap();
        let back = Checkpoint::from_bytes(&bytes).unwrap().into_state().unwrap();
        prop_assert_eq!(back, st);
    }
}
