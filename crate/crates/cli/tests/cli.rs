use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn maxdet(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maxdet"))
        .args(args)
        .arg("--cache")
        .arg(cache)
        .env("RUST_LOG", "warn")
        .output()
        .expect("spawn maxdet")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

#[test]
fn hadamard_order_has_unit_ratio() {
    let dir = tempfile::tempdir().unwrap();
    let out = maxdet(&dir.path().join("s.bin"), &["bound", "672"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["command"], "bound");
    assert_eq!(v["result"]["d"], 0);
    assert_eq!(v["result"]["construction"]["ratio_log"], 0.0);
    assert_eq!(v["result"]["construction"]["det_n"], "1");
}

#[test]
fn bound_670_beats_published_value() {
    let dir = tempfile::tempdir().unwrap();
    let out = maxdet(&dir.path().join("s.bin"), &["bound", "670", "--trials", "200"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let ratio = v["result"]["construction"]["ratio_decimal"].as_f64().unwrap();
    assert!(ratio > 0.012845, "{ratio}");
    assert_eq!(v["result"]["h"], 664);
}

#[test]
fn output_is_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("s.bin");
    let run = |threads: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_maxdet"));
        cmd.args(["search", "669", "--trials", "40", "--seed", "7", "--cache"]).arg(&cache);
        if let Some(t) = threads {
            cmd.env("MAXDET_THREADS", t);
        }
        let out = cmd.output().unwrap();
        assert_eq!(out.status.code(), Some(0));
        out.stdout
    };
    let a = run(None);
    assert_eq!(a, run(None));
    assert_eq!(a, run(Some("1")));
    assert_eq!(a, run(Some("3")));
}

#[test]
fn witness_round_trip_and_tamper() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("s.bin");
    let w = dir.path().join("w.json");
    let out = maxdet(&cache, &["bound", "669", "--trials", "8", "--witness", w.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    let out = maxdet(&cache, &["verify", w.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["certified"], true);
    assert_eq!(v["result"]["n"], 669);

    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&w).unwrap()).unwrap();
    let first = doc["B"][0].as_str().unwrap().to_string();
    let flipped: String = first
        .chars()
        .enumerate()
        .map(|(i, c)| if i == 0 { if c == '+' { '-' } else { '+' } } else { c })
        .collect();
    doc["B"][0] = Value::String(flipped);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&doc).unwrap()).unwrap();
    let out = maxdet(&cache, &["verify", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["result"]["certified"], false);
}

#[test]
fn injected_violation_fails_the_lemma_suite() {
    let dir = tempfile::tempdir().unwrap();
    let out = maxdet(&dir.path().join("s.bin"), &["lemmas", "--inject-violation"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn oracle_limits() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("s.bin");
    let out = maxdet(&cache, &["oracle", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["max_det"], 48);
    assert_eq!(maxdet(&cache, &["oracle", "6"]).status.code(), Some(2));
    assert_eq!(maxdet(&cache, &["oracle", "7", "--slow"]).status.code(), Some(2));
}

#[test]
fn bound_csv_has_a_header_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = maxdet(&dir.path().join("s.bin"), &["bound", "672", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("name,applicable,target,value_log,value_decimal"));
    assert!(lines.any(|l| l.starts_with("hadamard,true,")));
}

#[test]
fn csv_is_refused_where_unsupported() {
    let dir = tempfile::tempdir().unwrap();
    let out = maxdet(&dir.path().join("s.bin"), &["resolve", "700", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cached_and_fresh_sieves_agree() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("s.bin");
    let fresh = maxdet(&cache, &["gaps", "--max", "20000", "--x", "9000"]);
    assert!(cache.exists());
    let cached = maxdet(&cache, &["gaps", "--max", "20000", "--x", "9000"]);
    let rebuilt = maxdet(&cache, &["gaps", "--max", "20000", "--x", "9000", "--no-cache"]);
    assert_eq!(fresh.stdout, cached.stdout);
    assert_eq!(fresh.stdout, rebuilt.stdout);
    assert_eq!(json(&fresh)["command"], "gaps");
}

#[test]
fn resolve_reports_the_split() {
    let dir = tempfile::tempdir().unwrap();
    let out = maxdet(&dir.path().join("s.bin"), &["resolve", "5758"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json(&out)["result"];
    assert_eq!((r["h"].as_u64(), r["d"].as_u64()), (Some(5744), Some(14)));
}

#[test]
fn missing_recipe_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = maxdet(&dir.path().join("s.bin"), &["search", "670", "--method", "paley2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("nearest realizable order is 672"), "{err}");
}

#[test]
fn explicit_recipe_search() {
    let dir = tempfile::tempdir().unwrap();
    let out = maxdet(
        &dir.path().join("s.bin"),
        &["search", "--recipe", "paley1(11)", "--width", "2", "--trials", "32"],
    );
    assert_eq!(out.status.code(), Some(0));
    let r = &json(&out)["result"];
    assert_eq!(r["n"], 14);
    assert!(r["ratio_log"].as_f64().unwrap().is_finite());
}
