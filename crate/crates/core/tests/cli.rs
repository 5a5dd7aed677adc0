use std::path::PathBuf;
use std::process::{Command, Output};

use quantcert::nn::{Layer, Model};
use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_quantcert"));
    c.env_remove("QUANTCERT_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}\n{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    /// Class 1 iff x0 > 0.7, centers (0.5, 0.5) and (0.65, 0.5).
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let model = Model::new(2, vec![Layer::dense(2, 2, vec![0.0, 0.0, 1.0, 0.0], vec![0.0, -0.7])]).unwrap();
        std::fs::write(dir.path().join("model.json"), model.to_json()).unwrap();
        std::fs::write(dir.path().join("center.csv"), "# x0, x1\n0.5, 0.5\n0.65,0.5\n").unwrap();
        std::fs::write(dir.path().join("bad.csv"), "0.5,zero\n").unwrap();
        Fixture { dir }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn p(&self, name: &str) -> String {
        self.path(name).to_str().unwrap().to_string()
    }
}

fn certify_args<'a>(f: &'a Fixture, extra: &[&'a str]) -> Vec<String> {
    let mut v: Vec<String> = [
        "certify", "--theta", "0.01", "--eta", "0.01", "--delta", "0.01", "--strategy", "bincert",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    v.extend(["--model".into(), f.p("model.json"), "--center".into(), f.p("center.csv")]);
    v.extend(extra.iter().map(|s| s.to_string()));
    v
}

fn run_owned(args: &[String]) -> Output {
    bin().args(args).output().unwrap()
}

#[test]
fn plan_needs_no_oracle() {
    let out = run(&["plan", "--theta1", "0.1", "--theta2", "0.2", "--delta", "0.01"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("N=642"));
    assert!(text.contains("eta1=0.046410"));
    assert!(text.contains("t=0.146410"));

    let out = run(&["plan", "--theta1", "0.1", "--theta2", "0.2", "--delta", "0.01", "--json", "--seed", "1"]);
    let v = json(&out);
    assert_eq!(v["plan"]["n_samples"], 642);
    assert_eq!(v["config"]["command"]["subcommand"], "plan");
}

#[test]
fn budget_reports_terms() {
    let out = run(&["budget", "--theta", "0.1", "--eta", "0.001", "--delta", "0.01", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let k3 = v["budget"]["k3"].as_f64().unwrap();
    assert!((k3 - 7_530_472.566_355_48).abs() < 1e-3);
    assert!(v["budget"]["exact_schedule_total"].as_u64().unwrap() > 7_530_472);
}

#[test]
fn certify_model_report_schema() {
    let f = Fixture::new();
    let out = run_owned(&certify_args(&f, &["--norm", "linf", "--eps", "0.1", "--seed", "5"]));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    for key in ["config", "query", "strategy", "verdict", "total_samples", "wall_time_ms", "seed", "calls", "notes"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["verdict"], "yes");
    assert_eq!(v["config"]["seed"], 5);
    assert_eq!(v["seed"]["root_seed"], 5);
    let call = &v["calls"][0];
    for key in ["side", "theta1", "theta2", "delta_call", "n", "eta1", "eta2", "t", "successes", "p_hat", "outcome"] {
        assert!(call.get(key).is_some(), "call missing {key}");
    }
    assert!(v["notes"].as_array().unwrap().iter().any(|n| n.as_str().unwrap().contains("log base 2")));
}

#[test]
fn certify_exit_codes() {
    let f = Fixture::new();
    // second center row is 0.05 from the boundary: a 0.1 box straddles it
    let out = run_owned(&certify_args(&f, &["--center-row", "1", "--eps", "0.1", "--seed", "5"]));
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["verdict"], "no");

    let out = run_owned(&certify_args(&f, &["--eps", "0.1", "--max-samples", "5", "--seed", "5"]));
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["verdict"]["inconclusive"], "budget_exhausted");
}

#[test]
fn l2_reports_clamping_note() {
    let f = Fixture::new();
    let out = run_owned(&certify_args(&f, &["--center-row", "1", "--norm", "l2", "--eps", "0.4", "--seed", "2"]));
    let v = json(&out);
    assert!(v["notes"].as_array().unwrap().iter().any(|n| n.as_str().unwrap().contains("clamped")));
}

#[test]
fn validation_errors_exit_64_before_sampling() {
    let f = Fixture::new();
    let cases: Vec<Vec<String>> = vec![
        certify_args(&f, &[]),
        certify_args(&f, &["--eps", "0.1", "--center-row", "9"]),
        certify_args(&f, &["--eps", "-0.1"]),
        {
            let mut a = certify_args(&f, &["--eps", "0.1"]);
            let i = a.iter().position(|s| s.ends_with("center.csv")).unwrap();
            a[i] = f.p("bad.csv");
            a
        },
        ["certify", "--theta", "0.1", "--eta", "0.01", "--delta", "0.01"].iter().map(|s| s.to_string()).collect(),
        ["certify", "--theta", "0.1", "--eta", "0.01", "--delta", "1.5", "--bernoulli", "0.5"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        ["certify", "--theta", "0.1", "--eta", "0.01", "--delta", "0.1", "--bernoulli", "0.5", "--model", "m.json"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
    ];
    for args in cases {
        let out = run_owned(&args);
        assert_eq!(out.status.code(), Some(64), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn dimension_mismatch_is_usage_error() {
    let f = Fixture::new();
    std::fs::write(f.path("three.csv"), "0.5,0.5,0.5\n").unwrap();
    let mut args = certify_args(&f, &["--eps", "0.1"]);
    let i = args.iter().position(|s| s.ends_with("center.csv")).unwrap();
    args[i] = f.p("three.csv");
    let out = run_owned(&args);
    assert_eq!(out.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&out.stderr).contains("dimension"));
}

#[test]
fn env_seed_overrides_flag_and_entropy_seed_is_recorded() {
    let args = ["certify", "--theta", "0.1", "--eta", "0.05", "--delta", "0.1", "--bernoulli", "0.5", "--seed", "1"];
    let out = bin().args(args).env("QUANTCERT_SEED", "4242").output().unwrap();
    assert_eq!(json(&out)["config"]["seed"], 4242);

    let out = run(&args[..args.len() - 2]);
    let v = json(&out);
    assert!(v["config"]["seed"].is_u64());
    assert_eq!(v["config"]["seed"], v["seed"]["root_seed"]);
}

#[test]
fn out_flag_and_replay_verify() {
    let f = Fixture::new();
    let report = f.p("report.json");
    let out = run_owned(&certify_args(&f, &["--eps", "0.1", "--seed", "8", "--out", &report, "--threads", "3"]));
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let original = std::fs::read_to_string(&report).unwrap();

    let out = run(&["replay", &report, "--verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let a: Value = serde_json::from_str(&original).unwrap();
    let mut b = json(&out);
    b["wall_time_ms"] = a["wall_time_ms"].clone();
    assert_eq!(a, b);

    // tampering with the verdict is detected
    let tampered = original.replacen("\"verdict\": \"yes\"", "\"verdict\": \"no\"", 1);
    assert_ne!(tampered, original);
    std::fs::write(f.path("tampered.json"), tampered).unwrap();
    let out = run(&["replay", &f.p("tampered.json"), "--verify"]);
    assert_eq!(out.status.code(), Some(70));
}

#[test]
fn no_timing_reports_are_byte_identical() {
    let f = Fixture::new();
    let go = |threads: &str| {
        run_owned(&certify_args(&f, &["--center-row", "1", "--eps", "0.1", "--seed", "3", "--no-timing", "--threads", threads]))
    };
    let one = go("1");
    let eight = go("8");
    assert_eq!(one.stdout, eight.stdout);
    assert_eq!(json(&one)["wall_time_ms"], Value::Null);
}

#[test]
fn simulate_emits_csv() {
    let out = run(&[
        "simulate", "--strategy", "bincert,fixedcert", "--theta", "0.01", "--eta", "0.01", "--delta", "0.01",
        "--p-grid", "0:1:0.25", "--trials", "3", "--seed", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().unwrap().clone();
    assert_eq!(&headers[0], "p");
    assert!(headers.iter().any(|h| h == "ratio"));
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 10);
    for r in &rows {
        assert_eq!(&r[7], "552621");
    }

    let out = run(&["simulate", "--theta", "0.1", "--eta", "0.05", "--delta", "0.1", "--p-grid", "0.5", "--trials", "2", "--format", "json", "--seed", "1"]);
    let v = json(&out);
    assert_eq!(v["rows"].as_array().unwrap().len(), 1);
    assert_eq!(v["config"]["command"]["format"], "json");
}

#[test]
fn hardness_sweep_and_no_yes() {
    let f = Fixture::new();
    let base = [
        "hardness".to_string(), "--theta".into(), "0.001".into(), "--eta".into(), "0.001".into(), "--delta".into(),
        "0.01".into(), "--model".into(), f.p("model.json"), "--center".into(), f.p("center.csv"), "--seed".into(), "4".into(),
    ];
    let mut args = base.to_vec();
    args.extend(["--eps-grid".into(), "0.1,0.2,0.3".into()]);
    let out = run_owned(&args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["hardness"], 0.2);
    assert_eq!(v["probe_log"].as_array().unwrap().len(), 3);

    let mut args = base.to_vec();
    args.extend(["--eps-grid".into(), "0.3,0.4".into()]);
    let out = run_owned(&args);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["hardness"], Value::Null);

    let mut args = base.to_vec();
    args.extend(["--eps-lo".into(), "0.05".into(), "--eps-hi".into(), "0.4".into(), "--resolution".into(), "0.02".into()]);
    let out = run_owned(&args);
    assert_eq!(out.status.code(), Some(0));
    let h = json(&out)["hardness"].as_f64().unwrap();
    assert!((0.17..=0.2 + 1e-9).contains(&h), "bisected hardness {h}");

    let mut args = base.to_vec();
    args.extend(["--eps-grid".into(), "0.1".into(), "--eps-lo".into(), "0.1".into(), "--eps-hi".into(), "0.2".into()]);
    assert_eq!(run_owned(&args).status.code(), Some(64));
}

#[test]
fn oracle_cmd_certify() {
    let f = Fixture::new();
    let args = [
        "certify", "--theta", "0.1", "--eta", "0.05", "--delta", "0.05", "--oracle-cmd",
        "while read line; do echo 3; done", "--reference-label", "3", "--center", &f.p("center.csv"), "--eps", "0.1",
        "--seed", "1",
    ];
    let out = run(&args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut missing = args.to_vec();
    let i = missing.iter().position(|s| *s == "--reference-label").unwrap();
    missing.drain(i..i + 2);
    assert_eq!(run(&missing).status.code(), Some(64));

    let dying = ["certify", "--theta", "0.1", "--eta", "0.05", "--delta", "0.05", "--oracle-cmd", "read line; exit 0",
        "--reference-label", "0", "--center", &f.p("center.csv"), "--eps", "0.1"];
    let out = run(&dying);
    assert_eq!(out.status.code(), Some(70));
}
