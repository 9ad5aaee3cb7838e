use std::path::PathBuf;
use std::process::{Command, Output};

fn cylcover(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cylcover"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cylcover-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn stdout_json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

const SQUARE: &str = r#"{"kind":"vpolytope","dim":2,"vertices":[[-2,-2],[2,-2],[2,2],[-2,2]]}"#;
const DISK: &str = r#"{"kind":"ball","dim":2,"center":[0,0],"radius":1.5}"#;

#[test]
fn suite_runs_and_is_reproducible() {
    let a = cylcover(&["bang-density", "--trials", "5", "--seed", "3"]);
    assert_eq!(a.status.code(), Some(0));
    let b = cylcover(&["suite", "bang-density", "--trials", "5", "--seed", "3"]);
    assert_eq!(a.stdout, b.stdout);
    let v = stdout_json(&a);
    assert_eq!(v["passes"], 5);
    let csv = cylcover(&["bang-density", "--trials", "5", "--format", "csv"]);
    assert_eq!(String::from_utf8(csv.stdout).unwrap().lines().count(), 6);
    let text = cylcover(&["bang-density", "--trials", "2", "--format", "text"]);
    assert!(String::from_utf8(text.stdout).unwrap().contains("runtime"));
}

#[test]
fn usage_errors_exit_2() {
    let o = cylcover(&["nonexistent"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("flatness-ellipsoid"));
    assert_eq!(cylcover(&["width"]).status.code(), Some(2));
    assert_eq!(cylcover(&["rs", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(cylcover(&["width", "--freeness=ajar"]).status.code(), Some(2));
    let bad = scratch("bad.json", r#"{"kind":"torus","dim":2}"#);
    assert_eq!(cylcover(&["sd", "--body", bad.to_str().unwrap()]).status.code(), Some(2));
    let missing = scratch("x", "").with_file_name("does-not-exist.json");
    assert_eq!(cylcover(&["sd", "--body", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn width_and_freeness() {
    let sq = scratch("square.json", SQUARE);
    let o = cylcover(&["width", "--body", sq.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["width"], 4.0);
    assert_eq!(v["direction"], serde_json::json!([1, 0]));
    assert_eq!(v["lattice_free"], false);
    let tiny = scratch("tiny.json", r#"{"kind":"vpolytope","dim":2,"vertices":[[0,0],[1,0],[0,1]]}"#);
    let closed = stdout_json(&cylcover(&["width", "--body", tiny.to_str().unwrap(), "--freeness=closed"]));
    let open = stdout_json(&cylcover(&["width", "--body", tiny.to_str().unwrap(), "--freeness=open"]));
    assert_eq!(closed["lattice_free"], false);
    assert_eq!(open["lattice_free"], true);
}

#[test]
fn exact_cover_report() {
    let sq = scratch("square2.json", SQUARE);
    let rep = sq.with_file_name("cover.json");
    let o = cylcover(&[
        "cover",
        "--body",
        sq.to_str().unwrap(),
        "--k",
        "1",
        "--exact",
        "--report",
        rep.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(v["cardinality"], 5);
    assert_eq!(v["optimal"], true);
    assert_eq!(v["points"], 25);
    assert_eq!(v["flats"].as_array().unwrap().len(), 5);
    assert!(v["stats"]["nodes"].is_u64());
    assert!(v["lower_bounds"].is_object());
}

#[test]
fn sd_and_meanwidth() {
    let disk = scratch("disk.json", DISK);
    let v = stdout_json(&cylcover(&["sd", "--body", disk.to_str().unwrap()]));
    assert_eq!(v["sd"], 1.0);
    let tri = scratch("tri.json", r#"{"kind":"vpolytope","dim":2,"vertices":[[-1,-1],[2,-1],[-1,2]]}"#);
    let v = stdout_json(&cylcover(&["sd", "--body", tri.to_str().unwrap()]));
    assert!((v["sd"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    let v = stdout_json(&cylcover(&["meanwidth", "--body", disk.to_str().unwrap()]));
    assert_eq!(v["product"], 1.0);
}

#[test]
fn crv_exit_codes() {
    let disk = scratch("disk2.json", DISK);
    let full = r#"{"direction_basis":[[0,1]],"e_basis":[[1,0]],"base_vertices":[[-1.5],[1.5]]}"#;
    let half = r#"{"direction_basis":[[0,1]],"e_basis":[[1,0]],"base_vertices":[[-0.75],[0.75]]}"#;
    let f = scratch("full.json", full);
    let h = scratch("half.json", half);
    let o = cylcover(&["crv", "--body", disk.to_str().unwrap(), "--cylinders", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["sum_crv"], 1.0);
    let o = cylcover(&["crv", "--body", disk.to_str().unwrap(), "--cylinders", h.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout_json(&o)["covered"], false);
}

#[test]
fn out_file() {
    let out = scratch("o", "").with_file_name("report.json");
    let o = cylcover(&["flatness-ellipsoid", "--trials", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["instances"], 3);
}
