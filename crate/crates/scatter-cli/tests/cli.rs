use std::path::Path;
use std::process::Command;

use scatter_cli::output::sha256_hex;
use scatter_cli::{run, CliError, RunConfig};
use serde_json::Value;

fn config(body: &str, out: &Path) -> RunConfig {
    let mut cfg = RunConfig::from_json(body).unwrap();
    cfg.output = out.to_path_buf();
    cfg
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

fn manifest(dir: &Path) -> Value {
    serde_json::from_str(&read(&dir.join("manifest.json"))).unwrap()
}

const JOST: &str = r#"{"experiment": "jost", "potential": {"kind": "barrier", "height": 4.0}}"#;

#[test]
fn jost_run_is_reproducible() {
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run(&config(JOST, d1.path())).unwrap();
    run(&config(JOST, d2.path())).unwrap();
    for name in ["jost.csv", "jost_report.json"] {
        assert_eq!(read(&d1.path().join(name)), read(&d2.path().join(name)), "{name}");
    }
    let (m1, m2) = (manifest(d1.path()), manifest(d2.path()));
    assert_eq!(m1["files"], m2["files"]);
    assert_eq!(m1["config_hash"], m2["config_hash"]);
    let report: Value = serde_json::from_str(&read(&d1.path().join("jost_report.json"))).unwrap();
    assert_eq!(report["pass"], Value::Bool(true));
    let csv = read(&d1.path().join("jost.csv"));
    assert!(csv.starts_with("k,w_re,w_im,w0_re,w0_im,identity_lhs,identity_rhs,relative_error\n"));
    assert_eq!(csv.lines().count(), 21);
}

#[test]
fn manifest_hashes_match_files() {
    let d = tempfile::tempdir().unwrap();
    let cfg = config(JOST, d.path());
    run(&cfg).unwrap();
    let m = manifest(d.path());
    assert_eq!(m["experiment"], "jost");
    assert_eq!(m["config_hash"].as_str().unwrap(), sha256_hex(cfg.canonical_json().as_bytes()));
    for f in m["files"].as_array().unwrap() {
        let bytes = std::fs::read(d.path().join(f["path"].as_str().unwrap())).unwrap();
        assert_eq!(f["sha256"].as_str().unwrap(), sha256_hex(&bytes));
    }
}

#[test]
fn well_sweep_emits_consistent_slope() {
    let d = tempfile::tempdir().unwrap();
    let body = r#"{
        "experiment": "sweep",
        "grid": {"x_min": -10, "a": 0, "b": 1, "x_max": 10, "counts": [401, 201, 401]},
        "potential": {"kind": "well", "depth": 4.0},
        "theta": {"kind": "ladder", "theta1": [1, 0], "theta2": [0, 0], "sizes": [1e-2, 1e-3, 1e-4]},
        "spectrum": {"track": -1.5},
        "sweep": {"quantity": "eigenvalue_shift"}
    }"#;
    run(&config(body, d.path())).unwrap();
    let fit: Value = serde_json::from_str(&read(&d.path().join("sweep_fit.json"))).unwrap();
    let exponent = fit["fit"]["exponent"].as_f64().unwrap();
    assert!(exponent >= 0.9, "{exponent}");
    // recompute from the table
    let mut rdr = csv::Reader::from_path(d.path().join("sweep.csv")).unwrap();
    let rows: Vec<(f64, f64)> = rdr
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[4].parse().unwrap(), r[5].parse().unwrap())
        })
        .collect();
    let xs: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let again = scatter_cli::fit::log_slope(&xs, &ys);
    assert!((again.exponent - exponent).abs() < 1e-12);
}

#[test]
fn eigenfun_tables_and_columns() {
    let d = tempfile::tempdir().unwrap();
    let body = r#"{
        "experiment": "eigenfun",
        "potential": {"kind": "barrier", "height": 4.0},
        "theta": {"kind": "pair", "theta1": [0.02, 0], "theta2": [-0.01, 0]},
        "eigenfun": {"k_values": [-1.0, 1.3], "tables": true}
    }"#;
    run(&config(body, d.path())).unwrap();
    let csv = read(&d.path().join("scattering.csv"));
    assert!(csv.starts_with("k,r_re,r_im,t_re,t_im,flux,interface_residual,pde_residual,fit_residual\n"));
    let table = read(&d.path().join("eigenfunction_001.csv"));
    assert_eq!(table.lines().count(), 1 + 401 + 101 + 401);
}

#[test]
fn small_window_dynamics_experiments_run() {
    let d = tempfile::tempdir().unwrap();
    let body = r#"{
        "experiment": "propagate",
        "potential": {"kind": "barrier", "height": 4.0},
        "spectral": {"k_max": 4.0, "n_k": 64, "exclusion": 0.05},
        "theta": {"kind": "pair", "theta1": [0.01, 0], "theta2": [0.01, 0]},
        "propagate": {"packet": {"x0": -4.0, "sigma": 1.0, "k0": 1.5}, "times": [0.0, 1.0, 5.0]}
    }"#;
    run(&config(body, d.path())).unwrap();
    let csv = read(&d.path().join("propagate.csv"));
    assert!(csv.starts_with("t,remainder_norm,free_norm,perturbed_norm,packet_difference,wave_limit_deviation\n"));
    assert_eq!(csv.lines().count(), 4);

    let d = tempfile::tempdir().unwrap();
    let body = body.replace("\"propagate\",", "\"waveop\",");
    run(&config(&body, d.path())).unwrap();
    assert!(read(&d.path().join("waveop.csv")).lines().count() == 2);
}

#[test]
fn validation_errors_map_to_exit_one() {
    let d = tempfile::tempdir().unwrap();
    let no_potential = config(r#"{"experiment": "jost"}"#, d.path());
    let e = run(&no_potential).unwrap_err();
    assert!(matches!(e, CliError::Validation(_)) && e.exit_code() == 1);
    assert!(RunConfig::from_json(r#"{"experiment": "nope"}"#).is_err());
    let bad_tol = config(
        r#"{"experiment": "jost", "potential": {"kind": "barrier", "height": 4.0}, "tolerances": {"pde": -1.0}}"#,
        d.path(),
    );
    assert_eq!(run(&bad_tol).unwrap_err().exit_code(), 1);
    assert_eq!(CliError::Acceptance("x".into()).exit_code(), 3);
}

fn binary(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_scatter")).args(args).output().unwrap()
}

#[test]
fn binary_exit_codes() {
    let d = tempfile::tempdir().unwrap();
    let cfg_path = d.path().join("cfg.json");
    let out = d.path().join("out");
    std::fs::write(&cfg_path, JOST).unwrap();
    let args = |extra: &[&'static str]| {
        let mut v = vec!["run", "--config", cfg_path.to_str().unwrap(), "--out", out.to_str().unwrap()];
        v.extend_from_slice(extra);
        v.into_iter().map(String::from).collect::<Vec<_>>()
    };
    let call = |a: Vec<String>| binary(&a.iter().map(|s| s.as_str()).collect::<Vec<_>>());
    assert_eq!(call(args(&["--jobs", "1"])).status.code(), Some(0));
    assert!(out.join("manifest.json").exists());
    assert_eq!(call(args(&["--experiment", "bogus"])).status.code(), Some(1));
    assert_eq!(call(args(&["--jobs", "0"])).status.code(), Some(1));
    assert_eq!(binary(&["run"]).status.code(), Some(1));
    assert_eq!(binary(&["--help"]).status.code(), Some(0));

    // positive barrier has no bound state to continue: numerical failure
    let spectrum = r#"{
        "experiment": "spectrum",
        "potential": {"kind": "barrier", "height": 4.0},
        "spectrum": {"resolution": [5, 4], "track": -0.5}
    }"#;
    std::fs::write(&cfg_path, spectrum).unwrap();
    let o = call(args(&[]));
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
}
