//! Runs the `divgap` binary on fixed invocations and checks exit codes and
//! output shape.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const SCHEMA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/schema/divgap-output.schema.json");

fn divgap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divgap"))
        .args(args)
        .env_remove(divgap_cli::CONFIG_ENV)
        .output()
        .expect("spawn divgap")
}

fn code(args: &[&str]) -> i32 {
    divgap(args).status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--output", "json"]);
    let out = divgap(&all);
    let doc = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", stdout(&out)));
    (out.status.code().unwrap(), doc)
}

/// Keys whose values are small machine integers; everything else numeric
/// must be a decimal string.
const NUMERIC_KEYS: &[&str] = &["schema_version", "target", "t", "rounds", "n_max", "argmax", "zero_value_ns", "n", "exit_code"];

fn assert_big_ints_are_strings(v: &Value, key: &str) {
    match v {
        Value::Number(_) => assert!(NUMERIC_KEYS.contains(&key), "numeric literal under `{key}`"),
        Value::String(s) if key != "message" && key != "note" && s.starts_with(|c: char| c.is_ascii_digit()) => {
            assert!(s == "inf" || s.bytes().all(|b| b.is_ascii_digit()) || s.parse::<f64>().is_err(), "{key}: {s}");
        }
        Value::Array(items) => items.iter().for_each(|x| assert_big_ints_are_strings(x, key)),
        Value::Object(map) => map.iter().for_each(|(k, x)| assert_big_ints_are_strings(x, k)),
        _ => {}
    }
}

fn python_validator_available() -> bool {
    Command::new("python3")
        .args(["-c", "import jsonschema"])
        .output()
        .is_ok_and(|o| o.status.success())
}

fn validate_against_schema(doc: &Value) {
    let tmp = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(tmp.path(), serde_json::to_vec(doc).unwrap()).unwrap();
    let script = "import json,sys,jsonschema\n\
                  s=json.load(open(sys.argv[1]))\n\
                  jsonschema.Draft202012Validator.check_schema(s)\n\
                  jsonschema.Draft202012Validator(s).validate(json.load(open(sys.argv[2])))\n";
    let out = Command::new("python3")
        .args(["-c", script, SCHEMA, tmp.path().to_str().unwrap()])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "schema validation failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn classify_case_iv() {
    let (rc, doc) = json(&["classify", "1", "1", "1", "0"]);
    assert_eq!(rc, 0);
    assert_eq!(doc["verdict"]["kind"], "unbounded_for_all");
    assert_eq!(doc["verdict"]["case"]["case"], "IV");
}

#[test]
fn classify_flags_the_unlisted_constant_case() {
    for c in ["-3", "1", "5"] {
        let (rc, doc) = json(&["classify", "0", c, "0", "0"]);
        assert_eq!(rc, 0);
        assert_eq!(doc["verdict"]["kind"], "unbounded_for_all");
        assert!(doc["verdict"]["note"].is_string());
    }
    let (_, doc) = json(&["classify", "0", "1", "0", "2"]);
    assert!(doc["verdict"].get("note").is_none());
    let text = stdout(&divgap(&["classify", "0", "2", "0", "0"]));
    assert!(text.contains("note:"), "{text}");
}

#[test]
fn refute_multiples_of_e() {
    let (rc, doc) = json(&["refute", "0", "3", "2", "5", "--scan", "2000"]);
    assert_eq!(rc, 0);
    let report = &doc["report"];
    assert_eq!(report["family"]["variant"], "MultiplesOfE");
    assert_eq!(report["bound"], "3");
    assert_eq!(report["within_bound"], true);
    let max: u64 = report["scan"]["max_difference"].as_str().unwrap().parse().unwrap();
    assert!(max <= 3);
}

#[test]
fn exit_codes() {
    // 0: success
    assert_eq!(code(&["witness", "1", "1", "1", "0", "--set", "primes", "--target", "5"]), 0);
    assert_eq!(code(&["sarkozy", "--set", "primes", "--k", "4"]), 0);
    assert_eq!(code(&["chen", "--set", "multiples:4", "--n-max", "100"]), 0);
    assert_eq!(code(&["--help"]), 0);
    // 2: invalid input
    assert_eq!(code(&["witness", "0", "3", "2", "5", "--set", "primes", "--target", "5"]), 2);
    assert_eq!(code(&["refute", "1", "1", "1", "0", "--scan", "10"]), 2);
    assert_eq!(code(&["witness", "1", "1", "1", "0", "--set", "list:5,3", "--target", "2"]), 2);
    assert_eq!(code(&["witness", "1", "1", "1", "0", "--set", "powers:1", "--target", "2"]), 2);
    assert_eq!(code(&["witness", "1", "1", "1", "0", "--set", "list:2", "--target", "5"]), 2);
    assert_eq!(code(&["witness", "1", "1", "1", "0", "--set", "primes", "--target", "0"]), 2);
    assert_eq!(code(&["classify", "1", "x", "1", "0"]), 2);
    assert_eq!(code(&["scan", "--f", "1", "--g", "1", "--set", "primes", "--n-max", "0"]), 2);
    assert_eq!(code(&["classify", "1", "1", "1", "0", "--rounds", "3"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    // 3: search cap
    assert_eq!(code(&["witness", "1", "1", "1", "0", "--set", "primes", "--target", "40", "--max-prime-steps", "1"]), 3);
    assert_eq!(code(&["witness", "1", "1", "1", "0", "--set", "primes", "--target", "40", "--max-bits", "8"]), 3);
}

#[test]
fn verify_accepts_good_and_rejects_tampered_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    let (rc, mut doc) = json(&["witness", "2", "4", "-3", "5", "--set", "primes", "--target", "4"]);
    assert_eq!(rc, 0);
    std::fs::write(&path, doc.to_string()).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(code(&["verify", "--set", "primes", p]), 0);
    // Same certificate against a different set.
    assert_eq!(code(&["verify", "--set", "multiples:3", p]), 1);

    let n: u128 = doc["certificate"]["n"].as_str().unwrap().parse().unwrap();
    doc["certificate"]["n"] = Value::String((n + 1).to_string());
    std::fs::write(&path, doc["certificate"].to_string()).unwrap();
    let (rc, report) = json(&["verify", "--set", "primes", p]);
    assert_eq!(rc, 1);
    assert_eq!(report["verified"], false);
    assert!(!report["faults"].as_array().unwrap().is_empty());

    std::fs::write(&path, "{\"not\": \"a certificate\"}").unwrap();
    assert_eq!(code(&["verify", "--set", "primes", p]), 2);
}

#[test]
fn witness_reproduces_the_prime_construction() {
    let (rc, doc) = json(&["witness", "1", "1", "1", "0", "--set", "list:2,3,5", "--target", "1"]);
    assert_eq!(rc, 0);
    let cert = &doc["certificate"];
    assert_eq!(cert["n"], "29");
    assert_eq!(cert["aux"]["p"], "29");
    assert_eq!(cert["lhs_value"], "30");
    assert_eq!(doc["verified"], true);
}

#[test]
fn csv_series_format() {
    let out = divgap(&["scan", "--f", "0,1", "--g", "1,1", "--set", "powers:2", "--n-max", "8", "--output", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    // |v2(n) - v2(n+1)| for n = 1..8
    assert_eq!(stdout(&out), "n,diff\n1,1\n2,1\n3,2\n4,2\n5,1\n6,1\n7,3\n8,3\n");

    let out = divgap(&["scan", "--f", "0", "--g", "1", "--set", "primes", "--n-max", "3", "--output", "csv"]);
    assert_eq!(stdout(&out), "n,diff\n1,inf\n2,inf\n3,inf\n");

    let out = divgap(&["chen", "--set", "primes", "--n-max", "20", "--stride", "5", "--output", "csv"]);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,diff");
    assert_eq!(lines.iter().skip(1).map(|l| l.split(',').next().unwrap()).collect::<Vec<_>>(), ["1", "6", "11", "16"]);
}

#[test]
fn config_file_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("divgap.toml");
    std::fs::write(&path, "output = \"json\"\nmax_prime_steps = 1\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_divgap"))
        .args(["witness", "1", "1", "1", "0", "--set", "primes", "--target", "40"])
        .env(divgap_cli::CONFIG_ENV, &path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["kind"], "error");
    assert_eq!(doc["exit_code"], 3);

    // Flags beat the file.
    let out = Command::new(env!("CARGO_BIN_EXE_divgap"))
        .args(["classify", "1", "1", "1", "0", "--output", "text"])
        .env(divgap_cli::CONFIG_ENV, &path)
        .output()
        .unwrap();
    assert!(stdout(&out).contains("case IV"));

    std::fs::write(&path, "colour = \"blue\"\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_divgap"))
        .args(["classify", "1", "1", "1", "0"])
        .env(divgap_cli::CONFIG_ENV, &path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!Path::new(&dir.path().join("missing.toml")).exists());
    assert_eq!(code(&["classify", "1", "1", "1", "0", "--config", dir.path().join("missing.toml").to_str().unwrap()]), 2);
}

#[test]
fn every_json_document_matches_the_schema() {
    let invocations: &[&[&str]] = &[
        &["classify", "1", "1", "1", "0"],
        &["classify", "0", "3", "0", "0"],
        &["classify", "4", "2", "2", "1"],
        &["classify", "2", "4", "4", "8"],
        &["classify", "0", "0", "0", "0"],
        &["witness", "1", "1", "1", "0", "--set", "primes", "--target", "6"],
        &["witness", "0", "1", "-2", "4", "--set", "multiples:3", "--target", "4"],
        &["witness", "0", "0", "3", "1", "--set", "factorials", "--target", "4"],
        &["witness", "2", "4", "-3", "5", "--set", "factorials", "--target", "5"],
        &["refute", "0", "3", "2", "5", "--scan", "500"],
        &["refute", "4", "2", "2", "1", "--scan", "500"],
        &["refute", "2", "4", "4", "8", "--scan", "500"],
        &["scan", "--f", "1,1", "--g", "-7,0,1", "--set", "powers:3", "--n-max", "50", "--series"],
        &["sarkozy", "--set", "primes", "--k", "6"],
        &["sarkozy", "--set", "list:1,4,9,16", "--k", "4"],
        &["chen", "--set", "factorials", "--n-max", "40", "--series", "--stride", "7"],
        &["witness", "0", "3", "2", "5", "--set", "primes", "--target", "5"],
        &["witness", "1", "1", "1", "0", "--set", "primes", "--target", "40", "--max-prime-steps", "1"],
    ];
    let python = python_validator_available();
    if !python {
        eprintln!("python3 jsonschema not importable; checking structure only");
    }
    for args in invocations {
        let (_, doc) = json(args);
        assert_eq!(doc["schema_version"], 1, "{args:?}");
        assert!(doc["kind"].is_string(), "{args:?}");
        assert_big_ints_are_strings(&doc, "");
        if python {
            validate_against_schema(&doc);
        }
    }
}
