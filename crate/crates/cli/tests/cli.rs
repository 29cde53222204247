use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hardy-robin"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const SQUARE: &str = "[domain]\nvariant = \"polytope\"\nlo = [0.0, 0.0]\nhi = [1.0, 1.0]\n";

#[test]
fn lemma1_full_pipeline() {
    let out = run(&["verify", "lemma1", "--b", "1", "--sigma", "1", "--h", "0.001"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&out);
    assert_eq!(doc["report"]["experiment"], "lemma1");
    assert_eq!(doc["report"]["provenance"], "interval-robin");
    let lam = doc["report"]["levels"][0]["lambda_min"].as_f64().unwrap();
    assert!(lam >= -1e-3, "{lam}");
}

#[test]
fn weight_eval_square_center() {
    let dir = tempfile::tempdir().unwrap();
    let domain = write(dir.path(), "sq.toml", SQUARE);
    let points = write(dir.path(), "pts.csv", "x,y\n0.5,0.5\n");
    let out = run(&["weight", "eval", "--domain", &domain, "--sigma", "inf", "--points", &points]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[2].parse::<f64>().unwrap(), 2.0);
    assert_eq!(row[5], "singular");
}

#[test]
fn missing_radius_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let domain = write(dir.path(), "ball.toml", "[domain]\nvariant = \"ball\"\ncenter = [0.0, 0.0]\n");
    let out = run(&["verify", "convex", "--domain", &domain, "--sigma", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("radius"));
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.toml", "experiment = \"sharpness\"\nradiuses = [1.0]\n");
    let out = run(&["run", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("radiuses"));
}

#[test]
fn violation_exit_code() {
    let out = run(&["robin-ev", "--sigma", "-1", "--heights", "1", "--h", "0.01", "--tol", "1e-15"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["report"]["status"], "violation");
}

#[test]
fn negative_eigenvalue_demo() {
    let out = run(&["neg-ev-demo", "--sigma-left", "-1", "--sigma-right", "2", "--h", "0.001"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["report"]["status"], "pass");
    assert!(doc["report"]["levels"][0]["lambda_min"].as_f64().unwrap() < 0.0);

    let out = run(&["neg-ev-demo", "--sigma-left", "0", "--sigma-right", "2", "--h", "0.01"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["report"]["status"], "not-applicable");
    assert!(doc["report"]["levels"][0]["lambda_min"].as_f64().unwrap() >= 0.0);
}

#[test]
fn run_config_writes_report_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let trace = dir.path().join("t.csv");
    let cfg = format!(
        "experiment = \"convex\"\nresolutions = [0.25, 0.125]\n\n{SQUARE}\n[sigma]\nconstant = 2.0\n\n\
         [output]\nreport = {:?}\ntrace = {:?}\n",
        report.to_str().unwrap(),
        trace.to_str().unwrap()
    );
    let path = write(dir.path(), "run.toml", &cfg);
    let out = run(&["run", &path]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(doc["report"]["levels"].as_array().unwrap().len(), 2);
    let csv = fs::read_to_string(&trace).unwrap();
    assert!(csv.starts_with("experiment,h,dofs,lambda_min"));
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn seeded_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let domain = write(dir.path(), "sq.toml", SQUARE);
    let args = [
        "verify", "general", "--domain", &domain, "--sigma", "1", "--samples", "20000", "--h", "0.25", "--seed", "7",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    assert!(json(&a)["details"]["alpha"].as_f64().unwrap() > 0.0);
}

#[test]
fn geometry_probe_direction() {
    let dir = tempfile::tempdir().unwrap();
    let domain = write(dir.path(), "sq.toml", SQUARE);
    let out = run(&["geometry", "probe", "--domain", &domain, "--point", "0.3,0.5", "--direction", "1,0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().next().unwrap().ends_with("d_e,exits"));
    assert!(text.lines().nth(1).unwrap().ends_with("0.3,-0.3"));
}

#[test]
fn thread_cap_from_environment() {
    let out = bin()
        .env("HARDY_ROBIN_THREADS", "1")
        .args(["sharpness", "--sigma", "1", "--radii", "10,100"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = bin().env("HARDY_ROBIN_THREADS", "0").args(["sharpness", "--sigma", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exterior_radial() {
    let out = run(&["verify", "exterior", "--radius", "1", "--dim", "5", "--sigma", "0", "--nodes", "2000"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json(&out)["report"]["provenance"], "exterior");
}
