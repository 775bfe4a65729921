use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_metagenus"))
        .args(args)
        .env_remove("METAGENUS_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = run(&all);
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}"))
}

#[test]
fn signature_examples() {
    let o = run(&[
        "signature",
        "--h",
        "0",
        "--periods",
        "2,3,10",
        "--quotient",
        "4",
    ]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    for line in [
        "measure: 1/15",
        "order multiplier: 30",
        "abelianization: C2\n",
        "C4 quotient: no",
    ] {
        assert!(text.contains(line), "missing {line:?} in\n{text}");
    }
    let v = json(&["signature", "--periods", "2,6,6"]);
    assert_eq!(v["order_multiplier"]["numerator"], 12);
    assert_eq!(v["order_multiplier"]["denominator"], 1);

    let v = json(&["signature", "--h", "1"]);
    assert_eq!(v["hyperbolic"], false);
    assert_eq!(v["measure_num"], 0);
    assert!(v["error"].as_str().unwrap().contains("not hyperbolic"));
}

#[test]
fn group_examples() {
    let v = json(&["group", "--m", "7", "--n", "3", "--k", "2"]);
    assert_eq!(v["order"], 21);
    assert_eq!(v["exponent"], 21);
    assert_eq!(v["z_group"], true);
    let v = json(&["group", "--m", "8", "--n", "2", "--k", "3"]);
    assert_eq!(v["order"], 16);
    assert_eq!(v["cyclic_sylow2"], false);
    let v = json(&["group", "--m", "4", "--n", "2", "--k", "3", "--t", "2"]);
    assert_eq!(v["order"], 8);
    assert_eq!(v["exponent"], 4);
    assert_eq!(v["split"], false);
}

#[test]
fn min_genus_examples() {
    for (m, n, k, genus, sig) in [
        ("8", "2", "3", 2, [2, 4, 8]),
        ("3", "4", "2", 2, [3, 4, 4]),
        ("7", "3", "2", 3, [3, 3, 7]),
    ] {
        let v = json(&["min-genus", "--m", m, "--n", n, "--k", k]);
        assert_eq!(v["min_genus"], genus);
        assert_eq!(v["witness_signature"]["periods"], serde_json::json!(sig));
    }
}

#[test]
fn exit_codes() {
    // 0: verified
    assert_eq!(code(&run(&["verify", "lemma34"])), 0);
    // 1: computation ran but the claim failed
    let o = run(&[
        "min-genus",
        "--m",
        "7",
        "--n",
        "3",
        "--k",
        "2",
        "--genus-cap",
        "2",
    ]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("NotFoundWithinCap"));
    // 2: usage and configuration errors
    for args in [
        &["signature", "--periods", "1,3,7"][..],
        &["signature", "--periods", "x"],
        &["group", "--m", "7", "--n", "3", "--k", "3"],
        &["verify", "families"],
        &["verify", "families", "--variant", "a", "--prime", "4"],
        &["verify", "thm49", "--prime", "13"],
        &["verify", "thm48", "--order-max", "1"],
        &["verify", "thm48", "--order-max", "48", "--genus-cap", "2"],
        &["verify", "lemma34", "--threads", "0"],
        &["verify", "no-such-suite"],
    ] {
        assert_eq!(code(&run(args)), 2, "{args:?}");
    }
}

#[test]
fn verify_examples() {
    let o = run(&["verify", "thm48", "--order-max", "240", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["suite"], "thm48");
    assert_eq!(v["verified"], true);
    let ex = v["report"]["matched_exceptions"].as_array().unwrap();
    assert_eq!(ex.len(), 1);
    assert_eq!(ex[0]["order"], 16);
    assert_eq!(ex[0]["min_genus"], 2);
    assert!(v["report"]["violations"].as_array().unwrap().is_empty());

    let v = json(&["verify", "families", "--variant", "b", "--prime", "11"]);
    assert_eq!(v["verified"], true);
    let r = &v["report"];
    assert_eq!(r["order"], 110);
    assert_eq!(r["genus"], 12);
    assert_eq!(r["vector"]["elliptic"].as_array().unwrap().len(), 3);

    let o = run(&["verify", "thm49", "--prime", "17"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn every_suite_runs() {
    for suite in [
        "thm33",
        "lemma34",
        "thm45",
        "chain2310",
        "thm55",
        "cor56",
        "cor35",
        "prop42",
        "thm43",
        "thm44",
    ] {
        let o = run(&["verify", suite, "--order-max", "60"]);
        assert_eq!(
            code(&o),
            0,
            "{suite}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
}

#[test]
fn output_independent_of_thread_count() {
    for format in ["json", "csv", "text"] {
        let one = run(&[
            "verify",
            "thm55",
            "--order-max",
            "120",
            "--threads",
            "1",
            "--format",
            format,
        ]);
        let four = run(&[
            "verify",
            "thm55",
            "--order-max",
            "120",
            "--threads",
            "4",
            "--format",
            format,
        ]);
        assert_eq!(code(&one), 0);
        assert_eq!(one.stdout, four.stdout, "{format}");
    }
}

#[test]
fn csv_rows_match_json_rows() {
    let args = ["verify", "thm48", "--order-max", "64"];
    let v = json(&args);
    let rows = v["report"]["rows"].as_array().unwrap();
    let o = run(&[&args[..], &["--format", "csv"]].concat());
    let mut reader = csv::Reader::from_reader(o.stdout.as_slice());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        [
            "m",
            "n",
            "k",
            "t",
            "order",
            "min_genus",
            "ratio_num",
            "ratio_den",
            "class_tags",
            "exception_label"
        ]
    );
    let records: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(records.len(), rows.len());
    for (rec, row) in records.iter().zip(rows) {
        for (name, field) in header.iter().zip(rec.iter()) {
            let expected = match &row[name] {
                Value::Null => String::new(),
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            assert_eq!(field, expected, "{name} in {row}");
        }
    }

    let v = json(&["group", "--m", "12", "--n", "2", "--k", "5"]);
    let o = run(&[
        "group", "--m", "12", "--n", "2", "--k", "5", "--format", "csv",
    ]);
    let mut reader = csv::Reader::from_reader(o.stdout.as_slice());
    for rec in reader.records().map(Result::unwrap) {
        let (key, value) = (&rec[0], &rec[1]);
        match &v[key] {
            Value::String(s) => assert_eq!(value, s),
            Value::Array(tags) if key == "class_tags" => {
                let joined: Vec<&str> = tags.iter().map(|t| t.as_str().unwrap()).collect();
                assert_eq!(value, joined.join(";"));
            }
            Value::Number(_) | Value::Bool(_) => assert_eq!(value, v[key].to_string(), "{key}"),
            _ => {} // structured: params and abelianization render as text
        }
    }
}

fn cached_run(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_metagenus"))
        .args(args)
        .env("METAGENUS_CACHE", cache)
        .output()
        .unwrap()
}

#[test]
fn cache_round_trip_and_rejection() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("records.jsonl");
    let args = ["verify", "thm55", "--order-max", "72", "--format", "json"];
    let plain = run(&args);

    let first = cached_run(&cache, &args);
    assert_eq!(first.stdout, plain.stdout);
    let lines: Vec<String> = fs::read_to_string(&cache)
        .unwrap()
        .lines()
        .map(String::from)
        .collect();
    assert!(!lines.is_empty());
    for line in &lines {
        let e: Value = serde_json::from_str(line).unwrap();
        assert_eq!(e["key"], e["value"]["params"]);
        assert!(e["engine_version"]
            .as_str()
            .unwrap()
            .starts_with("metagenus-"));
    }

    let second = cached_run(&cache, &args);
    assert_eq!(second.stdout, plain.stdout);
    assert!(
        second.stderr.is_empty(),
        "{}",
        String::from_utf8_lossy(&second.stderr)
    );
    assert_eq!(
        fs::read_to_string(&cache).unwrap().lines().count(),
        lines.len(),
        "hits re-appended"
    );

    // Forge three entries: a lowered genus, a foreign engine version and
    // a line that is not JSON. All must be recomputed, not trusted.
    let mut forged: Vec<String> = lines.clone();
    let mut e0: Value = serde_json::from_str(&forged[0]).unwrap();
    let g = e0["value"]["min_genus"].as_u64().unwrap();
    e0["value"]["min_genus"] = Value::from(g + 1);
    forged[0] = e0.to_string();
    let mut e1: Value = serde_json::from_str(&forged[1]).unwrap();
    e1["engine_version"] = Value::from("metagenus-0.0.0/search-0");
    forged[1] = e1.to_string();
    forged.push("{not json".into());
    fs::write(&cache, forged.join("\n") + "\n").unwrap();

    let third = cached_run(&cache, &args);
    assert_eq!(third.stdout, plain.stdout);
    let err = String::from_utf8_lossy(&third.stderr);
    assert!(err.contains("3 cache entries failed validation"), "{err}");

    // The min-genus command reads the same store.
    let o = cached_run(
        &cache,
        &[
            "min-genus",
            "--m",
            "7",
            "--n",
            "3",
            "--k",
            "2",
            "--format",
            "json",
        ],
    );
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["min_genus"], 3);
}

#[test]
fn cached_record_with_corrupted_witness_is_recomputed() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c.jsonl");
    let args = [
        "min-genus",
        "--m",
        "3",
        "--n",
        "4",
        "--k",
        "2",
        "--format",
        "json",
    ];
    let plain = run(&args);
    cached_run(&cache, &args);
    let line = fs::read_to_string(&cache).unwrap();
    let mut e: Value = serde_json::from_str(line.trim()).unwrap();
    let ell = e["value"]["witness_vector"]["elliptic"]
        .as_array_mut()
        .unwrap();
    ell.swap(0, 1);
    fs::write(&cache, e.to_string() + "\n").unwrap();
    let o = cached_run(&cache, &args);
    assert_eq!(o.stdout, plain.stdout);
    assert!(String::from_utf8_lossy(&o.stderr).contains("1 cache entries failed validation"));
}
