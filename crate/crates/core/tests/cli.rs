use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_debye-screen");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn run_config(sub: &str, text: &str) -> Value {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.cfg", text);
    json_of(&run(&[sub, "--config", cfg.to_str().unwrap()]))
}

#[test]
fn massless_debye_mass() {
    let v = run_config("debye", "params.mass=0\n");
    assert_eq!(v["results"]["m_d_sq"].as_f64().unwrap(), 0.1666666667);
    assert_eq!(v["results"]["method"], "integral");
}

#[test]
fn debye_routes_agree() {
    let v = run_config("debye", "params.beta=1\nparams.mass=1\n");
    let s = v["results"]["series"].as_f64().unwrap();
    let i = v["results"]["integral"].as_f64().unwrap();
    assert!(((s - i) / s).abs() < 1e-6);
    assert_eq!(v["checks"][0]["name"], "cross_method");
    assert_eq!(v["checks"][0]["pass"], true);
}

#[test]
fn ground_state_debye() {
    let v = run_config("debye", "params.beta=inf\n");
    assert_eq!(v["results"]["m_d_sq"].as_f64().unwrap(), 0.0);
    assert_eq!(v["results"]["lambda_d"], "inf");
    assert_eq!(v["results"]["beta"], "inf");
}

#[test]
fn debye_scan_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "scan.cfg", "grid.betas=0.5,1\ngrid.masses=1,2,3\n");
    let csv = dir.path().join("scan.csv");
    let out = run(&["debye", "--config", cfg.to_str().unwrap(), "--out-csv", csv.to_str().unwrap(), "--quiet"]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "beta,mass,series,integral,rel_gap");
    assert!(lines[1].starts_with("# units: ") && lines[1].contains("config_sha256="));
    assert_eq!(lines.len(), 2 + 6);
}

#[test]
fn yukawa_rate() {
    let v = run_config("screening", "");
    let rate = v["results"]["fitted_rate"].as_f64().unwrap();
    let expected = v["results"]["expected_rate"].as_f64().unwrap();
    assert!(((rate - expected) / expected).abs() < 1e-3);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn coulomb_limit() {
    let v = run_config("screening", "params.lambda=0\n");
    assert!(v["results"]["fitted_rate"].as_f64().unwrap().abs() < 1e-6);
    assert!((v["results"]["far_field_charge"].as_f64().unwrap() - 1.0).abs() < 1e-4);
}

#[test]
fn delta_ladder_rows() {
    let v = run_config("screening", "screening.delta_ladder=0.4,0.2,0.1,0.05\nscreening.probes=1,3\n");
    let d = &v["results"]["delta_limit"];
    assert_eq!(d["rows"].as_array().unwrap().len(), 8);
    assert_eq!(d["all_monotone"], true);
    assert!(d["rows"].as_array().unwrap().iter().all(|r| r["monotone"] == true));
}

#[test]
fn full_kernel_spatial_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.cfg", "screening.mode=full_kernel\nsource.channel=spatial\n");
    let out = run(&["screening", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("screening.mode"));
}

#[test]
fn polarization_identities() {
    let v = run_config("polarization", "grid.p_points=5\n");
    assert!(v["results"]["identity_gap"].as_f64().unwrap() < 1e-4);
    let v = run_config("polarization", "polarization.channel=spatial\ngrid.p_points=5\n");
    assert!(v["results"]["f_hat_at_zero"].as_f64().unwrap().abs() < 1e-6);
    let v = run_config("polarization", "params.beta=inf\ngrid.p_points=5\n");
    assert_eq!(v["results"]["max_abs_f_hat"].as_f64().unwrap(), 0.0);
}

#[test]
fn infrared_divergence_is_a_computation_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "ir.cfg", "params.mass=0\npolarization.channel=spatial\ngrid.p_points=3\n");
    let out = run(&["polarization", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("polarization") && err.contains("diverges"), "{err}");
}

#[test]
fn decay_massive_and_massless() {
    let v = run_config("decay", "params.mass=1\n");
    assert!(v["results"]["slope"].as_f64().unwrap() <= -0.95);
    let v = run_config("decay", "params.mass=0\ndecay.channel=spatial_p\n");
    assert_eq!(v["results"]["bound_kind"], "polynomial");
    assert!(v["results"]["trend_slope"].as_f64().unwrap() <= 0.01);
}

#[test]
fn decay_lemma2_agreement() {
    let v = run_config("decay", "decay.lemma2_small=100000\ndecay.lemma2_large=200000\n");
    assert_eq!(v["results"]["lemma2"]["agree"], true);
    assert_eq!(v["results"]["lemma2"]["large"]["samples"], 200000);

    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "few.cfg", "decay.lemma2_small=20000\ndecay.lemma2_large=80000\n");
    let out = run(&["decay", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("samples"));
}

#[test]
fn limits_suite_passes() {
    let v = run_config("limits", "");
    assert_eq!(v["results"]["passed"], v["results"]["total"]);
}

#[test]
fn manifest_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "a.cfg", "params.beta=2\nparams.mass=0.5\nseed=9\ngrid.p_points=4\n");
    let first = json_of(&run(&["polarization", "--config", cfg.to_str().unwrap()]));
    let text = first["manifest"]["config_text"].as_str().unwrap();
    let again = write(dir.path(), "b.cfg", text);
    let second = json_of(&run(&["polarization", "--config", again.to_str().unwrap()]));
    assert_eq!(first, second);
    assert_eq!(second["manifest"]["config_text"].as_str().unwrap(), text);
    assert_eq!(first["manifest"]["config_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn json_schema() {
    let v = run_config("debye", "");
    for key in ["manifest", "results", "checks"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    for c in v["checks"].as_array().unwrap() {
        for key in ["name", "value", "reference", "tolerance", "pass"] {
            assert!(c.get(key).is_some(), "check misses {key}");
        }
    }
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "a.cfg", "seed=1\noutput.precision=8\n");
    let v = json_of(&run(&["debye", "--config", cfg.to_str().unwrap(), "--seed", "5", "--precision", "12"]));
    assert_eq!(v["manifest"]["config"]["seed"], "5");
    assert_eq!(v["manifest"]["config"]["output.precision"], "12");
}

#[test]
fn quiet_prints_nothing() {
    let out = run(&["limits", "--quiet"]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
}

#[test]
fn thread_count_does_not_change_output() {
    let one = Command::new(BIN).args(["screening"]).env("DEBYE_SCREEN_THREADS", "1").output().unwrap();
    let many = Command::new(BIN).args(["screening"]).env("DEBYE_SCREEN_THREADS", "0").output().unwrap();
    assert!(one.status.success() && many.status.success());
    assert_eq!(one.stdout, many.stdout);
    let bad = Command::new(BIN).args(["debye"]).env("DEBYE_SCREEN_THREADS", "many").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["debye", "--precision", "5"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["debye", "--config", "/nonexistent/file.cfg"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn config_errors_name_line_and_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.cfg", "# header\nparams.beta=1\nparams.mass=-1\n");
    let out = run(&["debye", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2") && err.contains("params"), "{err}");
    let cfg = write(dir.path(), "typo.cfg", "params.beta=1\nparams.bta=2\n");
    let err = String::from_utf8_lossy(&run(&["debye", "--config", cfg.to_str().unwrap()]).stderr).to_string();
    assert!(err.contains("line 2") && err.contains("params.bta"), "{err}");
}

#[test]
fn short_period_only_constrains_decay() {
    let v = run_config("polarization", "params.beta=0.25\ngrid.p_points=3\n");
    assert_eq!(v["results"]["channel"], "temporal");
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "d.cfg", "params.beta=0.25\n");
    let out = run(&["decay", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("decay.u"));
}
