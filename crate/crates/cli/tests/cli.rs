use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const L3: &str = r#"{"kind":"logic","exprs":["bot","m","top"],"theories":[[2],[1,2]],"connectives":{"join":[[0,1,2],[1,1,2],[2,2,2]],"meet":[[0,0,0],[0,1,1],[0,1,2]],"impl":[[2,2,2],[0,2,2],[0,1,2]],"neg":[2,0,0],"top":2,"bottom":0}}"#;

// the four-element Boolean algebra with a = 1, b = 2 as bit patterns
const L22: &str = r#"{"kind":"logic","exprs":["bot","a","b","top"],"theories":[[3],[1,3],[2,3]],"connectives":{"join":[[0,1,2,3],[1,1,3,3],[2,3,2,3],[3,3,3,3]],"meet":[[0,0,0,0],[0,1,0,1],[0,0,2,2],[0,1,2,3]],"impl":[[3,3,3,3],[2,3,2,3],[1,1,3,3],[0,1,2,3]],"neg":[3,2,1,0],"top":3,"bottom":0}}"#;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logicspace"))
        .args(args)
        .current_dir(dir)
        .env_remove("WORKBENCH_JOBS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    fs::write(dir.join(name), text).unwrap();
    name.to_string()
}

#[test]
fn classify_reports_intuitionistic_chain() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "l3.json", L3);
    let o = run(dir.path(), &["classify", "--input", &input, "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "class: intuitionistic"), "{}", stdout(&o));
}

#[test]
fn classify_json_is_parseable() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "l22.json", L22);
    let o = run(dir.path(), &["classify", "--input", &input, "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["class"], "classical");
}

#[test]
fn roundtrip_of_four_element_algebra_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "l22.json", L22);
    let o = run(dir.path(), &["roundtrip", "--input", &input, "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "iso_ok: true"), "{}", stdout(&o));
}

#[test]
fn unstable_logic_map_fails_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "l22.json", L22);
    write(dir.path(), "l3.json", L3);
    let map = write(
        dir.path(),
        "squash.json",
        r#"{"kind":"logic_map","source":"l22.json","target":"l3.json","map":[0,0,0,2]}"#,
    );
    let o = run(dir.path(), &["check-map", "--input", &map, "--format", "text"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l == "is_logic_map: true"), "{out}");
    assert!(out.lines().any(|l| l == "is_stable: false"), "{out}");
}

#[test]
fn dualized_space_round_trips_back() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "l3.json", L3);
    let o = run(dir.path(), &["dualize", "--input", &input, "--output", "space.json"]);
    assert_eq!(o.status.code(), Some(0));
    let space = fs::read_to_string(dir.path().join("space.json")).unwrap();
    assert!(space.starts_with("{\n  \"kind\": \"space\""), "{space}");
    assert!(space.ends_with("}\n"));
    let o = run(dir.path(), &["roundtrip", "--input", "space.json", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l == "direction: space"));
}

#[test]
fn emission_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "l22.json", L22);
    let a = run(dir.path(), &["space", "--input", &input]);
    let b = run(dir.path(), &["space", "--input", &input]);
    assert_eq!(a.stdout, b.stdout);
    assert!(!stdout(&a).contains('\r'));
}

#[test]
fn corpus_output_does_not_depend_on_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["corpus", "--max-points", "3", "--samples", "20", "--format", "json"];
    let one = run(dir.path(), &[&args[..], &["--jobs", "1"]].concat());
    let four = run(dir.path(), &[&args[..], &["--jobs", "4"]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn godel_witness_on_v_frame() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "v.json", r#"{"kind":"poset","elements":["r","b","c"],"leq":[["r","b"],["r","c"]]}"#);
    let o = run(dir.path(), &["godel-witness", "--input", &input, "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("{b}") && out.contains("{c}") && out.contains("{r,b,c}"), "{out}");
}

#[test]
fn export_dot_draws_hasse_edges() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "v.json", r#"{"kind":"poset","elements":["r","b","c"],"leq":[["r","b"],["r","c"]]}"#);
    let o = run(dir.path(), &["export-dot", "--input", &input]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("digraph"), "{out}");
    assert!(out.contains("rankdir=BT"));
}

#[test]
fn malformed_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "bad.json", r#"{"kind":"logic","exprs":["a"],"theories":[[5]]}"#);
    let o = run(dir.path(), &["classify", "--input", &input]);
    assert_eq!(o.status.code(), Some(2));
    let input = write(dir.path(), "broken.json", "{\"kind\":");
    let o = run(dir.path(), &["classify", "--input", &input]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(dir.path(), &["no-such-command"]);
    assert_eq!(o.status.code(), Some(2));
}
