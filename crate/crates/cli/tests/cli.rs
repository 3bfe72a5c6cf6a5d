use std::process::{Command, Output};

fn qma(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qma")).args(args).output().expect("runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn tmp(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("qma-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn confluence_suite_passes() {
    let o = qma(&["verify", "--suite", "confluence", "--preset", "qmat-2-2", "--max-deg", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("pass confluence/qmat-2-2"));
}

#[test]
fn gstar_suite_on_localized() {
    let o = qma(&["verify", "--suite", "gstar", "--preset", "localized-qmat32", "--max-deg", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn empty_suite_is_an_input_error() {
    let o = qma(&["verify", "--preset", "qmat-2-2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no suite selected"));
}

#[test]
fn failing_check_exits_one() {
    let o = qma(&["verify", "--suite", "hopf", "--preset", "torus-A1", "--max-deg", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL hopf-ef-commutator"));
}

#[test]
fn nu_table() {
    let o = qma(&["nu", "--preset", "cqU-A2", "--word", "1,2,1", "--max-deg", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 1);
    assert!(stdout(&o).contains("[0, 0, 0]"));
    let o = qma(&["nu", "--preset", "cqU-A2", "--word", "1,1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not reduced"));
}

#[test]
fn gauss_json_io() {
    let m = tmp("m.json");
    let out = tmp("g.json");
    std::fs::write(&m, r#"[["1/2","3"],["-2","7/3"],["5","1"]]"#).unwrap();
    let o = qma(&["gauss", "--matrix", m.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["product_check"], "exact_pass");
    assert_eq!(v["L"][2][1], "-87/43");
    assert_eq!(v["R"][1][1], "43/3");

    std::fs::write(&m, r#"[["0","1"],["1","0"],["0","0"]]"#).unwrap();
    let o = qma(&["gauss", "--matrix", m.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn gauss_symbolic() {
    let o = qma(&["gauss"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("x11^-1*x21"));
    assert!(stdout(&o).contains("product_check: exact_pass"));
}

#[test]
fn reports_are_deterministic() {
    let a = tmp("a.json");
    let b = tmp("b.json");
    for p in [&a, &b] {
        let o = qma(&["roundtrip", "--preset", "localized-qmat32", "--max-deg", "2", "--seed", "5", "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn specialize_a1() {
    let out = tmp("s.json");
    let o = qma(&["specialize", "--preset", "cqU-A1", "--max-deg", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let imgs = v["action"]["images"].as_array().unwrap();
    assert!(imgs.iter().any(|i| i["hopf_gen"] == "F1" && i["expr"] == "-x1^2"));
}

#[test]
fn malformed_algebra_file() {
    let f = tmp("bad.json");
    std::fs::write(&f, "{\"name\": ").unwrap();
    let o = qma(&["verify", "--suite", "action", "--algebra", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.json:1:"));
}
