use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_p1torsion"))
        .args(args)
        .env_remove("P1TORSION_PRECISION")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn height_is_one_half() {
    let out = run(&["height"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["value"], "1/2");
    assert_eq!(v["log_t_residue"], "0");
    assert_eq!(v["gamma_residue"], "0");
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn grr_check_residual_vanishes() {
    let out = run(&["grr-check", "--ell", "0", "--degree", "8"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["residual"], "0");
    for ell in ["-3", "2"] {
        let out = run(&["grr-check", "--ell", ell, "--degree", "6"]);
        assert_eq!(json(&out)["residual"], "0", "ell = {ell}");
    }
}

#[test]
fn torsion_series_constant_term() {
    let out = run(&["torsion", "--ell", "-1", "--series", "--order", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["constant_term"], "4*zeta'(-1)");
    assert_eq!(v["series"]["order"], 6);
}

#[test]
fn torsion_value_matches_its_series() {
    let out = run(&["torsion", "--ell", "1", "--t", "0.5", "--digits", "30"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let residual: f64 = v["series_residual"].as_str().unwrap().parse().unwrap();
    assert!(residual < 1e-20, "residual {residual}");
}

#[test]
fn scurrent_symbolic_and_numeric() {
    let out = run(&["scurrent", "--profile", "r^2", "--symbolic"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["symbolic"], "-4 + 4*gamma + 4*log(t)");
    let out = run(&["scurrent", "--profile", "r^2", "--t", "0.7", "--digits", "30"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["series_value"], v["quadrature_value"]);
}

#[test]
fn two_param_paths_agree() {
    let out = run(&["two-param", "--ell", "1", "--s", "0.7", "--t", "0.2", "--digits", "30"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let d: f64 = v["difference"].as_str().unwrap().parse().unwrap();
    assert!(d < 1e-20);
}

#[test]
fn torsion_form_csv() {
    let out = run(&["torsion-form", "--ell", "0", "--degree", "4", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("key,value"));
    assert!(text.lines().any(|l| l == "command,torsion-form"));
    assert!(text.lines().any(|l| l.starts_with("class.terms.c1^0 c2^0,")));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["height", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["--digits", "10", "height"]).status.code(), Some(2));
    assert_eq!(
        run(&["torsion-form", "--ell", "0", "--degree", "5"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["torsion", "--ell", "0", "--t", "7"]).status.code(), Some(2));
    assert_eq!(
        run(&["torsion", "--ell", "0", "--t", "1", "--series"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["scurrent", "--profile", "r^2"]).status.code(), Some(2));
}

#[test]
fn precision_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_p1torsion"))
        .args(["height"])
        .env("P1TORSION_PRECISION", "30")
        .output()
        .unwrap();
    assert_eq!(json(&out)["digits"], 30);
}

#[test]
fn output_is_deterministic() {
    let args = ["torsion", "--ell", "2", "--series", "--order", "8"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn selftest_reports_every_criterion() {
    let out = run(&["selftest", "--digits", "30"]);
    let v = json(&out);
    let rows = v["criteria"].as_array().unwrap();
    assert_eq!(rows.len(), 12);
    let all = rows.iter().all(|r| r["passed"] == true);
    assert_eq!(v["passed"], all);
    assert_eq!(out.status.code(), Some(if all { 0 } else { 1 }));
    assert_eq!(
        String::from_utf8_lossy(&out.stderr)
            .lines()
            .filter(|l| l.contains("criterion"))
            .count(),
        12
    );
}
