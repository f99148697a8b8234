use std::path::Path;
use std::process::{Command, Output};

use hardy_na_cli::report::{Payload, ReportEnvelope, SCHEMA};
use serde_json::Value;

fn hardy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hardy-na"))
        .args(args)
        .env_remove("HARDY_NA_SEED")
        .output()
        .expect("binary runs")
}

/// Validates against the shipped schema with the Python `jsonschema` package.
fn schema_errors(value: &Value) -> Vec<String> {
    let dir = tempfile::tempdir().unwrap();
    let schema = dir.path().join("schema.json");
    let doc = dir.path().join("doc.json");
    std::fs::write(&schema, SCHEMA).unwrap();
    std::fs::write(&doc, value.to_string()).unwrap();
    let script = "import json, sys, jsonschema\n\
                  s = json.load(open(sys.argv[1])); d = json.load(open(sys.argv[2]))\n\
                  v = jsonschema.Draft202012Validator(s, format_checker=jsonschema.FormatChecker())\n\
                  v.check_schema(s)\n\
                  for e in v.iter_errors(d): print(list(e.absolute_path), e.message)";
    let out = Command::new("python3")
        .arg("-c")
        .arg(script)
        .arg(&schema)
        .arg(&doc)
        .output()
        .expect("python3 with jsonschema is required for schema validation");
    assert!(out.status.success(), "validator crashed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8_lossy(&out.stdout).lines().map(str::to_string).collect()
}

fn report(out: &Output) -> (Value, ReportEnvelope) {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let value: Value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    let errors = schema_errors(&value);
    assert!(errors.is_empty(), "schema violations: {errors:#?}");
    let env: ReportEnvelope = serde_json::from_value(value.clone()).unwrap();
    (value, env)
}

#[test]
fn schema_rejects_malformed_reports() {
    let out = hardy(&["example", "trivial"]);
    let (mut v, _) = report(&out);
    v["payload"]["data"]["report"]["verdict"] = Value::from("Maybe");
    v["config_hash"] = Value::from("xyz");
    assert_eq!(schema_errors(&v).len(), 2);
}

#[test]
fn decide_nontrivial_example() {
    let out = hardy(&["decide", "--symbol", "B{zeros=[-0.3]}/B{zeros=[0.5]}", "--inner", "z", "--N", "16,32"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let (v, env) = report(&out);
    assert_eq!(v["payload"]["data"]["verdict"], "NA_both");
    let gen = &v["payload"]["data"]["analytic"]["extremal_generator"];
    assert_eq!(gen["power"], 1);
    assert_eq!(gen["zeros"][0]["point"][0], 0.5);
    assert_eq!(env.command, "decide");
    assert_eq!(env.config_hash, hardy_na_cli::report::config_hash(&env.config));
    assert!(String::from_utf8_lossy(&out.stderr).contains("NA_both"));
}

#[test]
fn example_trivial_passes() {
    let out = hardy(&["example", "trivial"]);
    assert_eq!(out.status.code(), Some(0));
    let (v, _) = report(&out);
    assert_eq!(v["payload"]["data"]["case"]["pass"], true);
    assert_eq!(v["payload"]["data"]["case"]["residuals"]["norm_defect"], 0.0);
}

#[test]
fn suite_writes_a_lossless_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cu.json");
    let out = hardy(&["suite", "cu", "--seed", "7", "--count", "20", "--N", "64", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let env: ReportEnvelope = serde_json::from_str(&text).unwrap();
    let Payload::Suite(cases) = &env.payload else { panic!("wrong payload") };
    assert_eq!(cases.len(), 20);
    assert!(cases.iter().all(|c| c.pass && c.recompute_pass()));
    let again: ReportEnvelope = serde_json::from_str(&env.to_json()).unwrap();
    assert_eq!(again, env);
    assert!(std::fs::read_dir(dir.path()).unwrap().count() == 1, "temporary files left behind");
}

#[test]
fn seed_comes_from_the_environment() {
    let with_flag = hardy(&["suite", "algebra", "--seed", "11", "--count", "3"]);
    let with_env = Command::new(env!("CARGO_BIN_EXE_hardy-na"))
        .args(["suite", "algebra", "--count", "3"])
        .env("HARDY_NA_SEED", "11")
        .output()
        .unwrap();
    let (a, _) = report(&with_flag);
    let (b, _) = report(&with_env);
    assert_eq!(a["payload"], b["payload"]);
    assert_eq!(a["config_hash"], b["config_hash"]);
}

#[test]
fn spectrum_of_the_non_na_symbol() {
    let out = hardy(&["spectrum", "--symbol", "poly(0.5,0.5)", "--inner", "z", "--N-list", "16,32"]);
    assert_eq!(out.status.code(), Some(0));
    let (v, _) = report(&out);
    let s = v["payload"]["data"]["sigma_max"].as_array().unwrap();
    let s16 = s[0].as_f64().unwrap();
    assert!((s16 - (std::f64::consts::PI / 35.0).cos()).abs() < 1e-10);
    assert!(s[1].as_f64().unwrap() > s16);
}

#[test]
fn exit_codes() {
    let bad = hardy(&["decide", "--symbol", "B{zeros=[0.5}", "--inner", "z"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("byte 12"));

    let semantic = hardy(&["decide", "--symbol", "z", "--inner", "poly(1,2)"]);
    assert_eq!(semantic.status.code(), Some(2));

    assert_eq!(hardy(&["suite", "nope"]).status.code(), Some(2));
    assert_eq!(hardy(&["example", "nope"]).status.code(), Some(2));
    assert_eq!(hardy(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(hardy(&["--help"]).status.code(), Some(0));

    let undecided = ["decide", "--symbol", "arc([0, pi])", "--inner", "B{zeros=[0.5]}", "--no-evidence"];
    assert_eq!(hardy(&undecided).status.code(), Some(0));
    let strict: Vec<&str> = undecided.iter().copied().chain(["--strict"]).collect();
    let out = hardy(&strict);
    assert_eq!(out.status.code(), Some(3));
    let (v, _) = report(&out);
    assert_eq!(v["payload"]["data"]["verdict"], "Undecided");

    // windows this small leave model-space tails above the algebra thresholds
    let failing = hardy(&["suite", "algebra", "--seed", "5", "--count", "6", "--N", "24"]);
    assert_eq!(failing.status.code(), Some(1));
    report(&failing);
}

#[test]
fn unwritable_output_is_an_error() {
    let out = hardy(&["example", "trivial", "--out", "/nonexistent-dir/x.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!Path::new("/nonexistent-dir/x.json").exists());
}
