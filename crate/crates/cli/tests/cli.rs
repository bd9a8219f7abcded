use std::io::Write;
use std::process::{Command, Output, Stdio};

use flatcover::surface::SurfaceFile;
use serde_json::Value;

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_flatcover"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn flatcover");
    let mut input = child.stdin.take().expect("stdin");
    input.write_all(stdin.unwrap_or("").as_bytes()).expect("write stdin");
    drop(input);
    child.wait_with_output().expect("wait")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn error(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stderr);
    let line = text.lines().last().expect("error line");
    serde_json::from_str(line).expect("structured error")
}

fn catalog(name: &str) -> String {
    let out = run(&["catalog", "get", name], None);
    assert!(out.status.success());
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn wollmilchsau_ranks_through_a_pipe() {
    let out = run(&["homology", "ranks"], Some(&catalog("eierlegende_wollmilchsau")));
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["result"], serde_json::json!({"rk_rel": 9, "rk_W": 7, "rk_W0": 4, "k_degree": 1}));
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["command"], "homology ranks");
    assert_eq!(r["surface_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn wollmilchsau_horizontal_cylinders() {
    let out = run(&["cylinders", "--direction", "1,0"], Some(&catalog("eierlegende_wollmilchsau")));
    let r = &json(&out)["result"];
    let cyls = r["cylinders"].as_array().unwrap();
    assert_eq!(cyls.len(), 2);
    for c in cyls {
        assert_eq!((c["circumference"].as_str(), c["height"].as_str()), (Some("4"), Some("1")));
    }
    assert_eq!(r["multi_twist"]["derivative"], serde_json::json!([["1", "4"], ["0", "1"]]));
}

#[test]
fn mismatched_edges_are_a_domain_error() {
    let mut file: Value = serde_json::from_str(&catalog("domino_torus")).unwrap();
    file["polygons"][0][1] = serde_json::json!(["3/2", "0"]);
    let out = run(&["surface", "validate"], Some(&file.to_string()));
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error(&out)["error"]["kind"], "EdgeLengthMismatch");
}

#[test]
fn parse_and_usage_errors() {
    let out = run(&["surface", "validate"], Some("{ not json"));
    assert_eq!(out.status.code(), Some(65));
    assert_eq!(error(&out)["error"]["exit_code"], 65);
    let out = run(&["cylinders", "--direction", "1;0"], Some(&catalog("square_torus")));
    assert_eq!(out.status.code(), Some(65));
    let out = run(&["frobnicate"], None);
    assert_eq!(out.status.code(), Some(64));
    let out = run(&["cylinders"], None);
    assert_eq!(out.status.code(), Some(64));
    let out = run(&["catalog", "get", "no_such_surface"], None);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error(&out)["error"]["kind"], "UnknownName");
}

#[test]
fn wrong_class_length_is_a_domain_error() {
    let out = run(&["cover", "analyze", "-w", "1,0"], Some(&catalog("domino_torus")));
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error(&out)["error"]["kind"], "DimensionMismatch");
}

#[test]
fn catalog_files_reserialize_canonically() {
    let out = run(&["catalog", "list"], None);
    for entry in json(&out)["result"].as_array().unwrap() {
        let text = catalog(entry["name"].as_str().unwrap());
        let spec = SurfaceFile::parse(&text).unwrap();
        let again = SurfaceFile::render(&spec) + "\n";
        assert_eq!(again, text);
        assert_eq!(SurfaceFile::parse(&again).unwrap(), spec);
    }
}

#[test]
fn output_is_deterministic() {
    let dom = catalog("domino_torus");
    let args = ["simulate", "-w", "1,-1,0", "--time", "2000", "--seed", "9"];
    let a = run(&args, Some(&dom));
    let b = run(&args, Some(&dom));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let r = json(&a);
    assert_eq!(r["seed"], 9);
    assert_eq!(r["result"]["flows"].as_array().unwrap().len(), 5);
}

#[test]
fn simulate_writes_trace_and_report_files() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let report = dir.path().join("report.json");
    let out = run(
        &[
            "simulate", "-w", "1,1,0", "--direction", "1,sqrt(2)", "--time", "50", "--trace",
            trace.to_str().unwrap(), "--out", report.to_str().unwrap(),
        ],
        Some(&catalog("domino_torus")),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let flow = &r["result"]["flow"];
    assert_eq!(flow["mode"], "exact");
    let csv = std::fs::read_to_string(&trace).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,polygon,n"));
    assert_eq!(lines.count() as u64, flow["crossings"].as_u64().unwrap());
}

#[test]
fn iet_identity_on_the_domino() {
    let out = run(&["iet", "-w", "1,1,0", "--direction", "1,sqrt(2)"], Some(&catalog("domino_torus")));
    let r = &json(&out)["result"];
    assert_eq!(r["identity_holds"], true);
    assert_eq!(r["cocycle_integral"], r["hol_theta_prime"]);
}

#[test]
fn auto_check_square_torus_rotation() {
    let dir = tempfile::tempdir().unwrap();
    let map = dir.path().join("map.json");
    std::fs::write(&map, r#"[{"source_polygon":0,"target_polygon":0,"offset":["1","1"],"vertex_shift":2}]"#).unwrap();
    let out = run(
        &["auto", "check", "--derivative", "-1,0,0,-1", "--map", map.to_str().unwrap()],
        Some(&catalog("square_torus")),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r = &json(&out)["result"];
    assert_eq!(r["action_rel"], serde_json::json!([[-1, 0], [0, -1]]));
    assert_eq!(r["checks"]["pairing"], true);
}

#[test]
fn octagon_certificate_has_infinite_index() {
    let text = catalog("octagon_double_cover");
    let basis = json(&run(&["homology", "basis"], Some(&text)))["result"]["W"].clone();
    let mut found = false;
    for w in basis.as_array().unwrap() {
        let w: Vec<String> = w.as_array().unwrap().iter().map(|x| x.to_string()).collect();
        let out = run(&["cover", "analyze", "-w", &w.join(",")], Some(&text));
        let kinds = json(&out)["result"]["kinds"].clone();
        assert!(kinds.as_array().unwrap().contains(&serde_json::json!("FirstKind_via_kernel")));
        found |= kinds.as_array().unwrap().contains(&serde_json::json!("InfiniteIndex"));
    }
    assert!(found);
}
