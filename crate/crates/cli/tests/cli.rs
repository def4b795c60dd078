use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("../../data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tensor-chromatic")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = run(&full);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code().unwrap(), v)
}

fn text(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn m(v: &Value, key: &str) -> Vec<u64> {
    v[key]["m"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect()
}

#[test]
fn chromatic_text_report() {
    let out = text(&["chromatic", &data("concentration3.tensor"), "--both"]);
    assert!(out.starts_with("seed 0, prime bits 31, trials 3 (at most 6)"));
    assert_eq!(out.matches("m              (1, 2, 4, 4, 2)").count(), 2);
    assert!(out.contains("binomial form  (1, 8, 24, 16, 2)"));
    assert!(out.contains("a^4 + 2*4*a^3*b + 4*6*a^2*b^2 + 4*4*a*b^3 + 2*b^4"));
    assert!(out.contains("equal: true"));
    assert!(out.contains("primes "));
}

#[test]
fn identity_and_relative_only() {
    let (code, v) = json(&["chromatic", &data("identity3.tensor")]);
    assert_eq!(code, 0);
    assert_eq!(m(&v, "chromatic"), vec![1]);
    assert_eq!(v["d"], 0);
    let (_, v) = json(&["chromatic", &data("block3.tensor"), "--relative"]);
    assert_eq!(m(&v, "relative"), vec![1, 2, 2, 1]);
    assert!(v.get("chromatic").is_none());
}

#[test]
fn differing_indices_reported() {
    let (_, v) = json(&["chromatic", &data("quadrics4.tensor"), "--both"]);
    assert_eq!(v["equal"], false);
    assert_eq!(v["differing"], serde_json::json!([6, 7]));
}

#[test]
fn characteristic_numbers() {
    let (_, v) = json(&["charnum", &data("cycle6.tensor"), "--b", "2,0,0,0,2"]);
    assert_eq!(v["value"], 10);
    let (_, v) = json(&["charnum", &data("quadrics4.tensor"), "--b", "7,0,0"]);
    assert_eq!(v["value"], 1);
    assert_eq!(v["trials"].as_array().unwrap().len(), 3);
    let (code, v) = json(&["charnum", &data("quadrics4.tensor"), "--b", "1,1"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "parse");
}

#[test]
fn graph_commands() {
    let (_, v) = json(&["graph", &data("k3.txt"), "--oracle-only"]);
    assert_eq!(v["oracle"], serde_json::json!([1, 2]));
    assert!(v.get("chromatic").is_none());
    let (_, v) = json(&["graph", &data("c6.txt")]);
    assert_eq!(m(&v, "chromatic"), vec![1, 5, 10, 10, 5]);
    let out = text(&["graph", &data("c6.txt"), "--verify"]);
    assert!(out.contains("verdict: match"));
}

#[test]
fn graph_rejections() {
    let (code, v) = json(&["graph", &data("loop.txt")]);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["tag"], "loop");
    let out = run(&["graph", &data("loop.txt")]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("loop"));
    assert!(out.stdout.is_empty());
    let (code, v) = json(&["graph", &data("two_components.txt")]);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["kind"], "precondition");
}

#[test]
fn rank_table_cells() {
    let (_, v) = json(&["rank-table", "--n", "3", "--r-range", "4", "--a-range", "4"]);
    assert_eq!(v["rows"][0]["cells"][0]["b"], 4);
    let (_, v) = json(&["rank-table", "--n", "3", "--r-range", "7", "--a-range", "5"]);
    assert_eq!(v["rows"][0]["cells"][0]["b"], 10);
    let (_, v) = json(&["rank-table", "--n", "2", "--r-range", "2-5", "--a-range", "2"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r["cells"][0]["b"] == 1));
    let out = text(&["rank-table", "--n", "2", "--r-range", "2-3"]);
    assert!(out.contains("   2 |       1       1\n"), "{out}");
    assert!(out.contains("   3 |       1       1       1\n"), "{out}");
}

#[test]
fn euler_reports() {
    let (_, v) = json(&["euler", &data("block3.tensor")]);
    assert_eq!((v["complement"].as_i64(), v["hypersurface"].as_i64()), (Some(0), Some(4)));
    let (_, v) = json(&["euler", &data("concentration3.tensor")]);
    assert_eq!(v["complement"], 1);
    let (_, v) = json(&["euler", &data("identity3.tensor")]);
    assert_eq!((v["complement"].as_i64(), v["hypersurface"].as_i64()), (Some(1), Some(0)));
}

#[test]
fn error_exit_codes() {
    let (code, v) = json(&["chromatic", &data("truncated.tensor")]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["exit_code"], 2);
    assert!(v["error"]["message"].as_str().unwrap().contains("expected 18 matrix entries"));

    let (code, v) = json(&["chromatic", &data("no_such_file.tensor")]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "parse");

    let (code, v) = json(&["--limit-n", "3", "chromatic", &data("quadrics4.tensor")]);
    assert_eq!(code, 4);
    assert_eq!(v["error"]["kind"], "limits");

    let (code, _) = json(&["--trials", "5", "--max-trials", "4", "chromatic", &data("block3.tensor")]);
    assert_eq!(code, 2);

    let (code, _) = json(&["--formulation", "inverse", "charnum", &data("quadrics4.tensor"), "--b", "1,5,1"]);
    assert_eq!(code, 2);

    assert_eq!(run(&["--prime-bits", "40", "chromatic", &data("block3.tensor")]).status.code(), Some(2));
}

#[test]
fn json_tensor_input() {
    let dir = std::env::temp_dir().join(format!("tensor-chromatic-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("block.json");
    let slices = "[[[1,0,0],[0,0,0],[0,0,0]],[[0,1,0],[1,0,0],[0,0,0]],[[0,0,0],[0,1,0],[0,0,0]],[[0,0,0],[0,0,0],[0,0,1]]]";
    std::fs::write(&path, format!("{{\"n\": 3, \"a\": 4, \"slices\": {slices}}}")).unwrap();
    let (code, v) = json(&["chromatic", path.to_str().unwrap()]);
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(code, 0);
    assert_eq!(m(&v, "chromatic"), vec![1, 2, 2, 1]);
}

#[test]
fn header_echoes_configuration() {
    let (_, v) = json(&["--seed", "99", "--prime-bits", "30", "--formulation", "minors", "chromatic", &data("block3.tensor")]);
    assert_eq!(v["config"]["seed"], 99);
    assert_eq!(v["config"]["prime_bits"], 30);
    assert_eq!(v["config"]["formulation"], "minors");
    let primes = v["chromatic"]["primes"].as_array().unwrap();
    assert_eq!(primes.len(), v["chromatic"]["trials_used"].as_u64().unwrap() as usize);
    assert!(primes.iter().all(|p| p.as_u64().unwrap() < 1 << 30));
}

#[test]
fn same_seed_same_bytes() {
    let args = ["--seed", "5", "chromatic", &data("concentration3.tensor"), "--both"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let other = ["--seed", "6", "chromatic", &data("concentration3.tensor"), "--both"];
    assert_ne!(run(&args).stdout, run(&other).stdout);
}
