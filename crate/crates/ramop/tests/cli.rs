use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ramop(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ramop"))
        .args(args)
        .env("RAMOP_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json report")
}

#[test]
fn ramanujan_prints_the_polynomial() {
    let dir = tempfile::tempdir().unwrap();
    let o = ramop(dir.path(), &["ramanujan", "--n", "2", "--format", "table"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("polynomial: 1 + x + y"));
    let o = ramop(dir.path(), &["ramanujan", "--n", "3"]);
    assert_eq!(json(&o)["result"]["polynomial"], "1 + 3x + 3y + 3x^2 + 5xy + 2y^2");
}

#[test]
fn dims_of_ram_three_match() {
    let dir = tempfile::tempdir().unwrap();
    let o = ramop(dir.path(), &["dims", "--operad", "ram", "--n", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["passed"], true);
    let table = &v["tables"][0]["table"];
    let total: u64 = table.as_array().unwrap().iter().map(|e| e["dim"].as_u64().unwrap()).sum();
    assert_eq!(total, 17);
    assert!(v["presentation_hashes"]["ram"].as_str().unwrap().len() == 64);
}

#[test]
fn conjecture_writes_the_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("verdict.json");
    let o = ramop(dir.path(), &["conjecture", "--n", "3", "--out", out.to_str().unwrap(), "--format", "table"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("isomorphism: true"));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["result"]["isomorphism"], true);
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn usage_and_resource_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(ramop(dir.path(), &["dims", "--operad", "ram", "--n", "3", "--bogus"]).status.code(), Some(2));
    assert_eq!(ramop(dir.path(), &["dims", "--operad", "nope", "--n", "3"]).status.code(), Some(2));
    assert_eq!(ramop(dir.path(), &["verify", "--suite", "all", "--n", "0"]).status.code(), Some(2));
    let o = ramop(dir.path(), &["dims", "--operad", "ram", "--n", "9"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("resource bound"));
    let o = ramop(dir.path(), &["ralg-dims", "--n", "4", "--max-rows", "10"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn forms_report_carries_seed_and_trials() {
    let dir = tempfile::tempdir().unwrap();
    let o = ramop(dir.path(), &["verify", "--suite", "forms", "--n", "4", "--seed", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["seed"], 5);
    assert_eq!(v["parameters"]["trials"], 20);
}

#[test]
fn cache_round_trip_and_invalidation() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c");
    let first = ramop(&cache, &["ralg-dims", "--n", "4", "--ambient", "full"]);
    let info = json(&ramop(&cache, &["cache", "info"]));
    assert_eq!(info["result"]["entry count"], 1);

    // damaged entries are ignored and recomputed
    for e in fs::read_dir(&cache).unwrap() {
        let p = e.unwrap().path();
        let text = fs::read_to_string(&p).unwrap().replace("\"rows\":[[", "\"rows\":[[[0,\"7\"],");
        fs::write(&p, text).unwrap();
    }
    let second = ramop(&cache, &["ralg-dims", "--n", "4", "--ambient", "full"]);
    assert_eq!(first.stdout, second.stdout);
    let repaired = fs::read_dir(&cache).unwrap().all(|e| !fs::read_to_string(e.unwrap().path()).unwrap().contains("[0,\"7\"]"));
    assert!(repaired);

    fs::write(cache.join("notes.txt"), "keep").unwrap();
    let cleared = json(&ramop(&cache, &["cache", "clear", "--dir", cache.to_str().unwrap()]));
    assert_eq!(cleared["result"]["removed"], 1);
    assert!(cache.join("notes.txt").exists());
}
