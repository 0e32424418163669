use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_quantrop"));
    c.env("QUANTROP_WORKERS", "2");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn quantrop")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn quantrop");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/schemas").join(name);
    let s: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    jsonschema::validator_for(&s).unwrap()
}

fn assert_valid(schema_name: &str, v: &Value) {
    let errors: Vec<String> = schema(schema_name).iter_errors(v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{schema_name}: {errors:?}");
}

const LINE: &str = r#"{"real_points":[{"alpha":"0","n":[1,0]},{"alpha":"1","n":[0,1]},{"alpha":null,"n":[-1,-1]}]}"#;

#[test]
fn count_line() {
    let o = run(&["count", "--degree", "d=1", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_valid("count.schema.json", &v);
    assert_eq!(v["N_trop"]["terms"], serde_json::json!([{"exp": "0", "coeff": "1"}]));
    assert_eq!(v["R_delta_s"]["text"], "-1*q^(-1/2) + 1*q^(1/2)");
}

#[test]
fn count_trials_and_determinism() {
    let args = ["count", "--degree", "d=2", "--s", "1,0,0", "--trials", "5", "--seed", "9"];
    let a = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert!(stdout(&a).contains("N_trop = 1*q^(-1/2) + 1*q^(1/2)"));
    assert_eq!(a.stdout, run(&args).stdout);
    let mut one = bin();
    one.env("QUANTROP_WORKERS", "1");
    assert_eq!(a.stdout, one.args(args).output().unwrap().stdout);
}

#[test]
fn count_degree_file() {
    let dir = std::env::temp_dir().join(format!("quantrop-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let f = dir.join("deg.json");
    let deg = serde_json::json!({"vectors": [[-1, 1], [1, 1], [0, -1], [0, -1]], "s": [0, 0, 1]});
    assert_valid("degree.schema.json", &deg);
    std::fs::write(&f, deg.to_string()).unwrap();
    let o = run(&["count", "--degree-file", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("R = 2*q^(0/1)"));
    let inline = run(&["count", "--degree", "-1,1;1,1;0,-1;0,-1", "--s", "0,0,1"]);
    assert_eq!(stdout(&inline), stdout(&o));
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(run(&["count", "--degree", "1,0;0,1"]).status.code(), Some(2));
    assert_eq!(run(&["count", "--degree", "d=1", "--s", "1,0,0"]).status.code(), Some(2));
    assert_eq!(run_stdin(&["qindex"], "not json").status.code(), Some(2));
    assert_eq!(run(&["local", "trivalent-complex", "--n1", "1,1", "--n2", "2,2"]).status.code(), Some(2));
}

#[test]
fn qindex_batch() {
    let parabola = r#"{"real_points":[{"alpha":"0","n":[1,-1]},{"alpha":null,"n":[-1,-1]}],"complex_pairs":[{"beta":["0","1"],"n":[0,1]}]}"#;
    let input: Value = serde_json::from_str(&format!("[{LINE},{parabola}]")).unwrap();
    assert_valid("real-param.schema.json", &input);
    let o = run_stdin(&["qindex"], &input.to_string());
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_valid("qindex-output.schema.json", &v);
    assert_eq!(v[0]["k"], "1/2");
    assert_eq!(v[1]["k"], "0");
    // one curve per line gives the same answer
    let lines = run_stdin(&["qindex"], &format!("{LINE}\n{parabola}\n"));
    assert_eq!(lines.stdout, o.stdout);
}

#[test]
fn enumerate_and_invariant_match_schemas() {
    let o = run(&["enumerate", "--degree", "d=2", "--s", "1,1,0", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_valid("enumerate.schema.json", &v);
    assert!(!v["curves"].as_array().unwrap().is_empty());

    let o = run(&["invariant", "--degree", "d=2", "--s", "1,0,0"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_valid("invariant.schema.json", &v);
    assert_eq!(v["N_trop"]["text"], "1*q^(-1/2) + 1*q^(1/2)");
}

#[test]
fn local_counts() {
    let o = run(&["local", "trivalent-complex", "--n1", "2,1", "--n2", "-1,3"]);
    assert!(stdout(&o).starts_with("m_delta = 7\n"));
    let o = run(&["local", "parabola-primitive", "--l1", "1", "--m", "2", "--theta", "1/3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(run(&["local", "ellipse-full", "--m", "3", "--theta1", "1/3", "--theta3", "1/5"]).status.code(), Some(2));
    let a = run(&["local", "s-sum", "--n", "2", "--theta", "1/5", "--varphi", "2/7"]);
    let b = run(&["local", "ellipse-full", "--m", "8", "--theta1", "1/5", "--theta3", "2/7"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_filter() {
    let o = run(&["verify", "--seed", "42", "--only", "s-lemma", "--regions"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("seed 42\n"));
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS  s-lemma/")).count(), 4);
}

#[test]
fn real_structures_lists_components() {
    let o = run(&["real-structures", "--degree", "d=2", "--s", "1,1,0"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    for c in v.as_array().unwrap() {
        assert!(!c["structures"].as_array().unwrap().is_empty());
    }
}
