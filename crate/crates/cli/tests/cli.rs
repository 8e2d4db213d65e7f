use std::path::Path;
use std::process::{Command, Output};

fn solvfel(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_solvfel"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

const SMALL: &str = "field_e0z = 100.0\nrho = 1.27e17\nn_particles = 512\ntau_end = 18.0\n";

#[test]
fn simulate_writes_all_files() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "run.toml", SMALL);
    let out = solvfel(&["simulate", "--config", "run.toml", "--out", "res", "--log-scale"], tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["summary.json", "trajectory.csv", "trajectory.svg"] {
        assert!(tmp.path().join("res").join(f).exists(), "{f}");
    }
    let csv = std::fs::read_to_string(tmp.path().join("res/trajectory.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "tau,A0_scaled,phi,bunch_re,bunch_im,p_mean,conserved");
    assert_eq!(csv.lines().count(), 1 + 181);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("res/summary.json")).unwrap()).unwrap();
    assert_eq!(summary["resolved_config"]["n_particles"], 512);
    assert!(summary["defaults_applied"].as_array().unwrap().iter().any(|k| k == "temperature"));
}

#[test]
fn overrides_change_the_run() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "run.toml", SMALL);
    let out = solvfel(
        &["simulate", "--config", "run.toml", "--out", "o", "--particles", "64", "--dt", "0.05", "--tau-end", "2", "--seed", "7"],
        tmp.path(),
    );
    assert!(out.status.success());
    let s = std::fs::read_to_string(tmp.path().join("o/summary.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    assert_eq!(v["resolved_config"]["n_particles"], 64);
    assert_eq!(v["resolved_config"]["dt"], 0.05);
    assert_eq!(v["resolved_config"]["rng_seed"], 7);
    assert_eq!(v["dynamics"]["steps"], 40);
}

#[test]
fn config_errors_exit_with_two() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "strong.toml", "rho = 1e17\nfield_e0z = 2e7\n");
    let out = solvfel(&["simulate", "--config", "strong.toml", "--out", "x"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2") && err.contains("field_e0z"), "{err}");

    write(tmp.path(), "both.toml", "rho = 1e17\nn_ions = 10.0\nvolume = 1.0\nfield_e0z = 1.0\n");
    let out = solvfel(&["simulate", "--config", "both.toml", "--out", "x"], tmp.path());
    assert_eq!(out.status.code(), Some(2));

    write(tmp.path(), "typo.toml", "rho = 1e17\nfield_e0z = 1.0\nparticles = 5\n");
    let out = solvfel(&["simulate", "--config", "typo.toml", "--out", "x"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let out = solvfel(&["simulate", "--config", "missing.toml", "--out", "x"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(!tmp.path().join("x").exists());
}

#[test]
fn mechanism_off_exits_with_four_and_writes_summary() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "off.toml", "rho = 1e17\npz_override = 0.0\n");
    let out = solvfel(&["simulate", "--config", "off.toml", "--out", "off"], tmp.path());
    assert_eq!(out.status.code(), Some(4));
    let s = std::fs::read_to_string(tmp.path().join("off/summary.json")).unwrap();
    assert!(s.contains("\"t_gain\": \"inf\""));
    assert!(s.contains("infinite"));
    assert!(!tmp.path().join("off/trajectory.csv").exists());
}

#[test]
fn plot_from_csv_is_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    write(tmp.path(), "run.toml", SMALL);
    assert!(solvfel(&["simulate", "--config", "run.toml", "--out", "r"], tmp.path()).status.success());
    assert!(!tmp.path().join("r/trajectory.svg").exists());
    assert!(solvfel(&["plot", "--out", "r", "--log-scale"], tmp.path()).status.success());
    let a = std::fs::read(tmp.path().join("r/trajectory.svg")).unwrap();
    assert!(solvfel(&["plot", "--input", "r/trajectory.csv", "--out", "p", "--log-scale"], tmp.path()).status.success());
    let b = std::fs::read(tmp.path().join("p/trajectory.svg")).unwrap();
    assert_eq!(a, b);

    write(tmp.path(), "empty.csv", "tau,A0_scaled,phi,bunch_re,bunch_im,p_mean,conserved\n");
    let out = solvfel(&["plot", "--input", "empty.csv", "--out", "e"], tmp.path());
    assert!(!out.status.success());
}

#[test]
fn derive_verify_and_sweep() {
    let tmp = tempfile::tempdir().unwrap();
    let out = solvfel(&["derive"], tmp.path());
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["a_sat"].as_f64().unwrap() / 5.1e-13 - 1.0).abs() < 0.1);

    let out = solvfel(&["verify"], tmp.path());
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 8);

    let out = solvfel(&["sweep", "--out", "s", "--rho", "1e17,8e17", "--pz", "1e-7,8e-7"], tmp.path());
    assert!(out.status.success());
    let csv = std::fs::read_to_string(tmp.path().join("s/sweep.csv")).unwrap();
    let rows: Vec<Vec<f64>> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 4);
    assert!((rows[2][2] / rows[0][2] - 4.0).abs() < 1e-12);
    assert!((rows[1][3] / rows[0][3] - 0.25).abs() < 1e-12);
}

#[test]
fn axon_summary_matches_reference_scales() {
    let tmp = tempfile::tempdir().unwrap();
    let out = solvfel(&["axon", "--out", "a", "--particles", "1024", "--tau-end", "15"], tmp.path());
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("a/summary.json")).unwrap()).unwrap();
    let d = &v["derived"];
    assert!((d["a_sat"].as_f64().unwrap() / 5.1e-13 - 1.0).abs() < 0.1);
    assert!((d["t_gain"].as_f64().unwrap() / 2.6e-6 - 1.0).abs() < 0.1);
    let ratio = v["transit"]["t_gain_over_transit"].as_f64().unwrap();
    assert!((0.1..=10.0).contains(&ratio));
    assert!(v["readout"]["validity_ratio"].as_f64().unwrap() < 1e-2);
    assert!(v["warnings"].as_array().unwrap().is_empty());
}
