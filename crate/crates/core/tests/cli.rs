use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entrywise")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = run(&all);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON report")
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn close(v: &Value, x: f64, tol: f64) -> bool {
    let y = v.as_f64().unwrap_or(f64::NAN);
    (x - y).abs() <= tol * x.abs().max(1.0)
}

#[test]
fn threshold_examples() {
    let r = json(&["threshold", "--c", "1,1", "--M", "2", "--N", "2", "--rho", "1"]);
    assert!(close(&r["results"]["constant"], 5.0, 1e-14));
    let chain: Vec<f64> = r["results"]["partial_constants"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert_eq!(chain.len(), 2);
    assert!((chain[0] - 1.0).abs() < 1e-14 && (chain[1] - 5.0).abs() < 1e-14);
    assert_eq!(r["inputs"]["seed"], 0);
    assert_eq!(r["tolerances"]["tol"], 1e-9);

    let r = json(&["threshold", "--c", "1", "--M", "4", "--N", "1", "--rho", "2"]);
    assert!(close(&r["results"]["constant"], 16.0, 1e-14));
    let r = json(&["threshold", "--c", "1,1", "--M", "1", "--N", "2", "--rho", "1"]);
    assert_eq!(r["results"]["constant"], 1.0);
}

#[test]
fn threshold_verdicts() {
    let r = json(&["threshold", "--c", "1,1", "--M", "2", "--cprime=-0.2"]);
    assert_eq!(r["results"]["admissibility"], "boundary");
    let r = json(&["threshold", "--c", "1,1", "--M", "2", "--cprime", "-0.21", "--samples", "2000"]);
    assert_eq!(r["results"]["admissibility"], "inadmissible");
    assert_eq!(r["results"]["positivity_check"]["witness_found"], true);
    let w = &r["results"]["positivity_check"]["witness"]["matrix"];
    assert_eq!(w["n"], 2);
    let r = json(&["threshold", "--c", "1,1", "--M", "2", "--empirical"]);
    assert!(close(&r["results"]["empirical"]["estimate"], 5.0, 1e-2));
}

#[test]
fn verify_identity_runs_clean() {
    let r = json(&["verify-identity", "pencil", "--max-N", "3", "--max-M", "6", "--trials", "5"]);
    assert_eq!(r["results"]["pencil"]["failures"], 0);
    assert_eq!(r["results"]["total_failures"], 0);
    let r = json(&["--backend", "float", "verify-identity", "--max-N", "3", "--max-M", "5", "--trials", "5"]);
    for k in ["pencil", "cauchy-binet", "decomposition", "moments"] {
        assert_eq!(r["results"][k]["failures"], 0, "{k}");
    }
}

#[test]
fn rayleigh_examples() {
    let r = json(&["rayleigh", "--rank-one", "1,0.5+0.5i,-0.3i", "--c", "1,2,1", "--M", "4"]);
    assert!(r["results"]["max_relative_gap"].as_f64().unwrap() < 1e-8);

    let dir = tempfile::tempdir().unwrap();
    let scalar = write(dir.path(), "s.json", r#"{"n": 1, "entries": [[{"re": 0.5}]]}"#);
    let r = json(&["rayleigh", "--matrix", &scalar, "--c", "2", "--M", "3"]);
    // a^M / h_c(a) with h_c = 2
    assert!(close(&r["results"]["spectral_radius"], 0.0625, 1e-12));
    assert!(close(&r["results"]["variational"], 0.0625, 1e-12));

    let r = json(&["rayleigh", "--probe-discontinuity", "--c", "1,1,1", "--M", "3"]);
    assert!(r["results"]["relative_gap"].as_f64().unwrap() > 0.1);
    assert_eq!(r["results"]["table"].as_array().unwrap().len(), 5);

    let zero = write(dir.path(), "z.json", r#"{"n": 2, "entries": [[{"re": 0}, {"re": 0}], [{"re": 0}, {"re": 0}]]}"#);
    assert_eq!(code(&["rayleigh", "--matrix", &zero, "--c", "1,1", "--M", "2"]), 3);
}

#[test]
fn stratify_examples() {
    let dir = tempfile::tempdir().unwrap();
    let a2 = write(
        dir.path(),
        "a2.json",
        r#"{"n": 3, "entries": [
            [{"re": 5}, {"re": -5}, {"re": 0.5, "im": 0.5}],
            [{"re": -5}, {"re": 5}, {"re": -0.5, "im": -0.5}],
            [{"re": 0.5, "im": -0.5}, {"re": -0.5, "im": 0.5}, {"re": 2}]]}"#,
    );
    let r = json(&["stratify", "--matrix", &a2, "--group", "s1"]);
    assert_eq!(r["results"]["partition"], "{{1,2},{3}}");
    assert_eq!(r["results"]["offdiagonal_verified"], true);
    let r = json(&["stratify", "--matrix", &a2, "--group", "trivial"]);
    assert_eq!(r["results"]["partition"], "{{1},{2},{3}}");

    let ones = write(dir.path(), "ones.json", r#"{"n": 3, "entries": [[{"re": 2}, {"re": 2}, {"re": 2}], [{"re": 2}, {"re": 2}, {"re": 2}], [{"re": 2}, {"re": 2}, {"re": 2}]], "rho": 2}"#);
    let r = json(&["stratify", "--matrix", &ones]);
    assert_eq!(r["results"]["partition"], "{{1,2,3}}");
    assert_eq!(r["results"]["kernel_dim"], 2);
    assert!(r["results"]["max_principal_angle"].as_f64().unwrap() < 1e-8);

    let diag = write(dir.path(), "d.json", r#"{"n": 2, "entries": [[{"re": 1}, {"re": 0}], [{"re": 0}, {"re": 3}]]}"#);
    let r = json(&["stratify", "--matrix", &diag, "--group", "cx"]);
    assert_eq!(r["results"]["partition"], "{{1},{2}}");
    assert_eq!(r["results"]["kernel_dim"], 0);

    let bad = write(dir.path(), "np.json", r#"{"n": 2, "entries": [[{"re": 1}, {"re": 2}], [{"re": 2}, {"re": 1}]]}"#);
    let out = run(&["stratify", "--matrix", &bad]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("eigenvalue"));
}

#[test]
fn experiments() {
    let r = json(&["experiment", "sharpness", "--c", "1,1", "--M", "2"]);
    assert!(close(&r["results"]["empirical"], 5.0, 1e-2));
    let r = json(&["experiment", "power-nonpreservation", "--N", "2", "--alpha", "0.5"]);
    assert_eq!(r["results"]["verdict"], "witness-found");
    let r = json(&["experiment", "cross-dim", "--draws", "100"]);
    assert_eq!(r["results"]["all_hold"], true);
    let r = json(&["experiment", "closure-probe", "--target", "{{1,2}}", "--source", "{{1},{2}}", "--N", "2"]);
    assert_eq!(r["results"]["consistent"], true);
    let r = json(&["experiment", "horn-witness", "--f", "1,-1,1", "--N", "2"]);
    assert_eq!(r["results"]["verdict"], "witness-found");
}

#[test]
fn reports_are_reproducible() {
    let args = ["--seed", "7", "threshold", "--c", "1,1", "--M", "2", "--cprime", "-0.3", "--samples", "500"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stdout).contains("seed: 7"));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["threshold", "--c", "1,1", "--M", "2"]), 0);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["experiment", "nope"]), 2);
    assert_eq!(code(&["threshold", "--c", "1,x", "--M", "2"]), 2);
    assert_eq!(code(&["threshold", "--c", "1,1", "--M", "2", "--N", "3"]), 2);
    assert_eq!(code(&["rayleigh", "--rank-one", "1+2j", "--c", "1", "--M", "1"]), 2);
    assert_eq!(code(&["stratify", "--matrix", "/nonexistent/matrix.json"]), 2);
    assert_eq!(code(&["threshold", "--c", "1,0", "--M", "2"]), 3);
    assert_eq!(code(&["threshold", "--c", "1,1", "--M", "2", "--rho=-1"]), 3);
}
