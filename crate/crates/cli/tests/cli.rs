use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;
use unitdist::norms::{near_round_polytope, Norm, PolytopeNorm};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_unitdist"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn write(dir: &Path, name: &str, v: &Value) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, v.to_string()).unwrap();
    p
}

fn write_norm(dir: &Path, name: &str, p: PolytopeNorm) {
    write(dir, name, &serde_json::to_value(Norm::Polytope(p)).unwrap());
}

fn setup() -> TempDir {
    let dir = TempDir::new().unwrap();
    write_norm(dir.path(), "norm.json", near_round_polytope(2, 3));
    dir
}

#[test]
fn version_reports_schema() {
    let out = bin().arg("--version").output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("(schema 1)"));
}

#[test]
fn hypercube_then_exact_count() {
    let dir = setup();
    let d = dir.path();
    let out = run(d, &["construct", "hypercube", "--norm", "norm.json", "--k", "10", "--seed", "7", "--out", "pts.json"]);
    assert_eq!(out.status.code(), Some(0));
    let built: Value = serde_json::from_str(&fs::read_to_string(d.join("pts.json")).unwrap()).unwrap();
    assert_eq!(built["schema"], 1);
    assert_eq!(built["points"]["mode"], "exact");
    assert_eq!(built["points"]["points"].as_array().unwrap().len(), 1024);
    let promised = built["promised_edges"].as_u64().unwrap();
    assert_eq!(promised, 5120);

    let report = stdout_json(&run(d, &["count", "unit", "--norm", "norm.json", "--points", "pts.json", "--exact"]));
    assert_eq!(report["n"], 1024);
    assert_eq!(report["mode"], "exact");
    let edges = report["edges"].as_u64().unwrap();
    assert!(edges >= promised);
    assert_eq!(report["edge_list"].as_array().unwrap().len() as u64, edges);
    let class_total: u64 = report["direction_classes"].as_array().unwrap().iter().map(|c| c["edges"].as_u64().unwrap()).sum();
    assert_eq!(class_total, edges);
    assert_eq!(report["ceiling_ok"], json!(edges as f64 <= report["ceiling"].as_f64().unwrap()));

    // float mode finds the same edges
    let float = stdout_json(&run(d, &["count", "unit", "--norm", "norm.json", "--points", "pts.json"]));
    assert_eq!(float["mode"], "float");
    assert_eq!(float["edges"].as_u64().unwrap(), edges);
}

#[test]
fn exact_count_rejects_float_points() {
    let dir = setup();
    let d = dir.path();
    write(d, "pts.json", &json!({"d": 2, "mode": "float", "points": [[0.0, 0.0], [1.0, 0.0]]}));
    let out = run(d, &["count", "unit", "--norm", "norm.json", "--points", "pts.json", "--exact"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "graph");
}

#[test]
fn span_audit_verdicts() {
    let dir = setup();
    let d = dir.path();
    write(d, "v.json", &json!([["1", "0"], ["0", "1"]]));
    let clean = stdout_json(&run(d, &["audit", "span", "--vectors", "v.json", "--d", "2", "--m", "0"]));
    assert_eq!(clean["verdict"], "clean");

    write(d, "w.json", &json!([["1", "0"], ["2", "0"], ["0", "1"]]));
    for method in ["exhaustive", "partition"] {
        let bad = stdout_json(&run(d, &["audit", "span", "--vectors", "w.json", "--d", "1", "--method", method]));
        assert_eq!(bad["verdict"], "violated");
        assert_eq!(bad["witness"], json!([0]));
        assert_eq!(bad["spanned"], json!([0, 1]));
    }
}

#[test]
fn partition_and_greedy() {
    let dir = setup();
    let d = dir.path();
    write(d, "v.json", &json!([["1", "0"], ["0", "1"], ["1", "1"], ["1", "-1"]]));
    let p = stdout_json(&run(d, &["partition", "--vectors", "v.json", "--d", "2"]));
    assert_eq!(p["classes"].as_array().unwrap().len(), 2);
    let g = stdout_json(&run(
        d,
        &["audit", "greedy", "--vectors", "v.json", "--weights", "1/4,1/4,1/4,1/4", "--d", "2", "--max-weight", "1/4"],
    ));
    assert_eq!(g["indices"].as_array().unwrap().len(), 2);
}

#[test]
fn entropy_and_ungar() {
    let dir = setup();
    let d = dir.path();
    let e = stdout_json(&run(d, &["audit", "entropy", "--sizes", "2,1,1"]));
    assert_eq!((e["lhs"].as_f64(), e["rhs"].as_f64(), e["ok"].as_bool()), (Some(1.0), Some(0.0), Some(true)));

    let out = run(d, &["audit", "entropy", "--sizes", "1,2"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "deplab");
    assert!(err["message"].is_string());

    write(d, "p.json", &json!({"d": 2, "mode": "exact", "points": [["0", "0"], ["1", "0"], ["0", "1"], ["1", "1"]]}));
    let u = stdout_json(&run(d, &["audit", "ungar", "--points", "p.json"]));
    assert_eq!(u["count"], 4);
    assert_eq!(u["collinear"], false);
}

#[test]
fn generic_family_and_sample() {
    let dir = setup();
    let d = dir.path();
    write_norm(d, "hex.json", PolytopeNorm::hexagon());
    write(d, "scheme.json", &json!({"d": 2, "l": 1, "A": [["1"], ["2"], ["3"]], "eta_deg": "5"}));
    let fam = stdout_json(&run(d, &["generic", "family", "--scheme", "scheme.json", "--norm", "hex.json"]));
    assert!(fam["count"].as_u64().unwrap() > 0);
    assert_eq!(fam["planes"].as_array().unwrap().len() as u64, fam["count"].as_u64().unwrap());

    let out = run(d, &["generic", "sample", "--norm", "hex.json", "--schemes", "scheme.json", "--seed", "3", "--out", "g.json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let g: Value = serde_json::from_str(&fs::read_to_string(d.join("g.json")).unwrap()).unwrap();
    assert_eq!(g["seed"], 3);

    // the sampled norm loads back as a norm and moves no more than the bound
    let h = stdout_json(&run(d, &["hausdorff", "--norm", "hex.json", "--other", "g.json"]));
    assert_eq!(h["sampled"], false);
    assert!(h["distance"].as_f64().unwrap() > 0.0);
}

#[test]
fn generic_sample_with_class_certificate() {
    let dir = setup();
    let d = dir.path();
    let g = stdout_json(&run(d, &["generic", "sample", "--norm", "norm.json", "--height", "2", "--max-l", "2"]));
    let cert = &g["certificate"];
    assert!(cert.is_object());
    assert_eq!(cert["primes"].as_array().unwrap().len(), 16);
}

#[test]
fn plot_is_standalone_svg() {
    let dir = setup();
    let d = dir.path();
    assert!(run(d, &["construct", "hypercube", "--norm", "norm.json", "--k", "4", "--out", "pts.json"]).status.success());
    let out = run(d, &["plot", "--norm", "norm.json", "--points", "pts.json"]);
    assert!(out.status.success());
    let svg = String::from_utf8(out.stdout).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("viewBox") && svg.trim_end().ends_with("</svg>"));
}

#[test]
fn trials_are_deterministic_across_job_counts() {
    let dir = setup();
    let d = dir.path();
    let args = |jobs: &'static str| {
        vec!["construct", "hypercube", "--norm", "norm.json", "--k", "6", "--trials", "4", "--seed", "11", "--jobs", jobs]
    };
    let a = run(d, &args("1"));
    let b = run(d, &args("4"));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    let seeds: Vec<u64> = v["trials"].as_array().unwrap().iter().map(|t| t["seed"].as_u64().unwrap()).collect();
    assert_eq!(seeds, vec![11, 12, 13, 14]);
}

#[test]
fn usage_errors_exit_two() {
    let dir = setup();
    let d = dir.path();
    // missing input
    assert_eq!(run(d, &["audit", "ungar", "--points", "missing.json"]).status.code(), Some(2));
    // missing output directory
    let out = run(d, &["construct", "hypercube", "--norm", "norm.json", "--k", "3", "--out", "no/such/dir/p.json"]);
    assert_eq!(out.status.code(), Some(2));
    // unknown flag
    assert_eq!(run(d, &["count", "unit", "--bogus"]).status.code(), Some(2));
    // format not offered by the subcommand
    assert_eq!(run(d, &["audit", "entropy", "--sizes", "1", "--format", "svg"]).status.code(), Some(2));
}

#[test]
fn csv_outputs() {
    let dir = setup();
    let d = dir.path();
    assert!(run(d, &["construct", "hypercube", "--norm", "norm.json", "--k", "3", "--out", "pts.json"]).status.success());
    let out = run(d, &["count", "distinct", "--norm", "norm.json", "--points", "pts.json", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("distance,multiplicity"));
    let total: u64 = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse::<u64>().unwrap()).sum();
    assert_eq!(total, 8 * 7 / 2);
}
