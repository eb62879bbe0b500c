use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_riesz-lab"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("RIESZ_LAB_THREADS", t),
        None => cmd.env_remove("RIESZ_LAB_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

const TRIESZ: &str = r#"{"n":2,"nu":5.0,"k":1.0,"tau":[0.25,-0.5],"rho":0.5}"#;

fn sample_args<'a>(seed: &'a str, stream: &'a str, format: &'a str) -> Vec<&'a str> {
    vec![
        "sample", "--dist", "triesz", "--variant", "II", "--params", TRIESZ, "--n", "9000", "--seed", seed, "--stream",
        stream, "--format", format,
    ]
}

#[test]
fn sample_output_is_bitwise_reproducible() {
    for format in ["csv", "jsonl"] {
        let a = run(&sample_args("11", "3", format), Some("1"));
        let b = run(&sample_args("11", "3", format), Some("4"));
        let c = run(&sample_args("11", "3", format), None);
        assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(a.stdout, c.stdout);
        assert_ne!(a.stdout, run(&sample_args("12", "3", format), Some("1")).stdout);
        assert_ne!(a.stdout, run(&sample_args("11", "4", format), Some("1")).stdout);
    }
}

#[test]
fn csv_sample_layout() {
    let out = stdout(&run(&sample_args("2", "0", "csv"), None));
    let mut lines = out.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with('#') && header.contains("seed=2") && header.contains("stream=0"), "{header}");
    assert_eq!(lines.next().unwrap(), "y_1_1_re,y_1_2_re,y_2_1_re,y_2_2_re");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 9000);
    assert!(rows.iter().all(|r| r.split(',').all(|v| v.parse::<f64>().is_ok())));
}

#[test]
fn jsonl_sample_layout() {
    let out = stdout(&run(&sample_args("2", "7", "jsonl"), None));
    let mut lines = out.lines();
    let header: Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(header["header"]["seed"], 2);
    assert_eq!(header["header"]["stream"], 7);
    let first: Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(first["n"], 2);
    assert_eq!(first["re"].as_array().unwrap().len(), 2);
}

#[test]
fn eval_prints_logpdf() {
    // Scalar Riesz-I with a = 2, κ = 1 is Gamma(3, 1): log(x² e^{−x} / 2) at x = 2.
    let out = run(&["eval", "--dist", "riesz-I", "--params", r#"{"a":2.0,"kappa":[1.0]}"#, "--point", "[[2.0]]"], None);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    let expected = 2.0_f64.ln() - 2.0;
    assert!((v["logpdf"].as_f64().unwrap() - expected).abs() < 1e-12);

    let query = r#"{"dist":"riesz-I","params":{"a":2.0,"kappa":[1.0]},"point":[[2.0]]}"#;
    let q: Value = serde_json::from_str(stdout(&run(&["eval", "--params", query], None)).trim()).unwrap();
    assert_eq!(q, v);
}

#[test]
fn eval_outside_support_is_minus_infinity() {
    let out = run(&["eval", "--dist", "riesz-I", "--params", r#"{"a":2.0,"kappa":[1.0]}"#, "--point", "[[-1.0]]"], None);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), r#"{"logpdf":"-inf"}"#);
}

#[test]
fn invalid_parameters_exit_with_two() {
    let out = run(
        &["eval", "--dist", "riesz", "--variant", "II", "--params", r#"{"a":0.1,"kappa":[1.0,0.0]}"#, "--point", "[[1,0],[0,1]]"],
        None,
    );
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("a > (m-1)beta/2 + k_1"), "{msg}");

    let out = run(&["sample", "--dist", "triesz-I", "--params", r#"{"n":1,"nu":-1.0,"tau":[0.0],"rho":1.0}"#], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn table_and_sv_density() {
    let out = stdout(&run(&["table", "--params", r#"{"function":"ln_gamma"}"#, "--grid", "1:3:3"], None));
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows[0], "a,ln_gamma");
    assert_eq!(rows[1], "1.0,0.0");
    assert_eq!(rows[3], "3.0,0.6931471805599453");

    let params = r#"{"n":3,"m":2,"nu":4.0,"k":0.0,"tau":[1,0],"rho":0.25}"#;
    let out = stdout(&run(&["sv-density", "--dist", "sv-triesz-I", "--params", params, "--grid", "[[2,1],[1,1]]"], None));
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows[1], "alpha_1,alpha_2,logpdf");
    assert!(rows[2].split(',').nth(2).unwrap().parse::<f64>().unwrap().is_finite());
    assert!(rows[3].ends_with(",-inf"));
}

#[test]
fn check_reports_json_array() {
    let out = run(&["check", "--suite", "jacobian"], Some("2"));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let reports: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let reports = reports.as_array().unwrap();
    assert!(!reports.is_empty());
    assert!(reports.iter().all(|r| r["passed"] == true));
    assert!(String::from_utf8_lossy(&out.stderr).contains("checks passed"));

    assert_eq!(run(&["check", "--suite", "missing"], None).status.code(), Some(2));
}
