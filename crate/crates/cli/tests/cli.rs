use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const MINIMAL: &str = r#"{"p": 2, "q": 3, "branches": [{"b": 1, "d": 2}], "g": []}"#;

fn cuspres(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cuspres"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn check_minimal_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.json", MINIMAL);
    let o = cuspres(&["check", "--input", &input]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let hopf = out.lines().find(|l| l.starts_with("Hopf residual")).unwrap();
    assert_eq!(hopf.split_whitespace().last(), Some("0"));
}

#[test]
fn validation_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.json", r#"{"p": 1, "q": 3, "branches": [{"b": 1, "d": 2}]}"#);
    let o = cuspres(&["resolve", "--input", &input]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("p,q ≥ 2"));
    let broken = write(dir.path(), "broken.json", "{\"p\": 2,\n \"q\": }");
    let o = cuspres(&["check", "--input", &broken]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn guard_exhaustion_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.json", MINIMAL);
    let o = cuspres(&["resolve", "--input", &input, "--guard", "2"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn pi1_for_even_r() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.json", MINIMAL);
    let json = dir.path().join("pi1.json");
    let o = cuspres(&["pi1", "--input", &input, "--out", json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("α² = β²"), "{out}");
    assert!(out.contains("abelianization: Z^2 ⊕ Z/2"));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(v["simplified"]["case"], "r-even");
    assert_eq!(v["simplified"]["relations"][0]["lhs"], serde_json::json!([1, 1]));
}

#[test]
fn resolve_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.json", MINIMAL);
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let o = cuspres(&["resolve", "--input", &input, "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let (a, b) = (fs::read(a).unwrap(), fs::read(b).unwrap());
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn graph_writes_dot() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.json", MINIMAL);
    let dot = dir.path().join("g.dot");
    let o = cuspres(&["graph", "--input", &input, "--dot-out", dot.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(dot).unwrap();
    assert!(text.starts_with("graph divisor {"));
    let nodes = text.lines().filter(|l| l.contains(" [label=") && !l.contains("--")).count();
    assert_eq!(nodes, 8);
}

#[test]
fn report_lists_components() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.json", MINIMAL);
    let o = cuspres(&["report", "--input", &input]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("essential: D_3,2"), "{out}");
    assert!(out.contains("special: D_1,1, D_2,1"));
    assert!(out.contains("shapes: ok"));
}

#[test]
fn field_order_override() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.json", MINIMAL);
    assert_eq!(cuspres(&["check", "--input", &input, "--field-order", "8"]).status.code(), Some(0));
    assert_eq!(cuspres(&["check", "--input", &input, "--field-order", "6"]).status.code(), Some(1));
}
