use std::fs;

use assert_cmd::Command;
use predicates::prelude::*;
use serde_json::Value;
use tempfile::TempDir;

fn spinmcg() -> Command {
    Command::cargo_bin("spinmcg").unwrap()
}

fn stdout_of(args: &[&str]) -> String {
    let out = spinmcg().args(args).assert().success().get_output().stdout.clone();
    String::from_utf8(out).unwrap()
}

fn json_of(args: &[&str]) -> Value {
    serde_json::from_str(&stdout_of(args)).unwrap()
}

#[test]
fn verify_table1_passes() {
    spinmcg()
        .args(["verify-table1", "--format", "text"])
        .assert()
        .success()
        .stdout(predicate::str::starts_with("PASS 50/50"));
    let v = json_of(&["verify-table1"]);
    assert_eq!(v["pass"], true);
    assert_eq!(v["report"]["passed"], 50);
}

#[test]
fn verify_table1_with_perturbed_classes_fails() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("classes.json");
    let classes = r#"{"C1":[1,0,0,0],"C2":[0,1,0,0],"C3":[1,0,1,1],"C4":[0,0,0,1],"C5":[0,0,-1,0]}"#;
    fs::write(&path, classes).unwrap();
    spinmcg()
        .args(["verify-table1", "--format", "text", "--classes"])
        .arg(&path)
        .assert()
        .code(1)
        .stdout(predicate::str::starts_with("FAIL"));
}

#[test]
fn arf_of_zero_form() {
    spinmcg().args(["arf", "--g", "2", "--form", "0,0,0,0", "--format", "text"]).assert().success().stdout("0\n");
    spinmcg().args(["arf", "--g", "1", "--form", "1,1", "--format", "text"]).assert().success().stdout("1\n");
}

#[test]
fn forms_by_arf() {
    let v = json_of(&["forms", "--g", "2", "--arf", "0"]);
    assert_eq!(v.as_array().unwrap().len(), 10);
    let v = json_of(&["forms", "--g", "3", "--arf", "1"]);
    assert_eq!(v.as_array().unwrap().len(), 28);
}

#[test]
fn reduce_blocks_example() {
    let v = json_of(&["reduce-blocks", "--g", "1", "--vector", "5,2"]);
    assert_eq!(v["output"], serde_json::json!([1, 0]));
    spinmcg()
        .args(["reduce-blocks", "--g", "1", "--vector", "5,2", "--format", "text"])
        .assert()
        .success()
        .stdout(predicate::str::ends_with("= 1,0\n"));
}

#[test]
fn eval_and_spin_check() {
    let v = json_of(&["eval", "--word", "C1"]);
    assert_eq!(v["matrix"], serde_json::json!([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]));
    spinmcg().args(["spin-check", "--word", "C1", "--format", "text"]).assert().success().stdout("false\n");
    spinmcg().args(["spin-check", "--word", "X1 D3 T", "--format", "text"]).assert().success().stdout("true\n");
    spinmcg()
        .args(["spin-check", "--g", "3", "--word", "Y4 T1 T2", "--format", "text"])
        .assert()
        .success()
        .stdout("true\n");
}

#[test]
fn malformed_inputs_exit_two() {
    spinmcg().args(["eval", "--word", "C1 Q7"]).assert().code(2).stderr(predicate::str::contains("Q7"));
    spinmcg().args(["eval", "--word", "C6"]).assert().code(2).stderr(predicate::str::contains("C6"));
    spinmcg().args(["reduce-delta", "--vector", "3,x,1,1"]).assert().code(2).stderr(predicate::str::contains("`x`"));
    spinmcg()
        .args(["reduce-delta", "--vector", "2,0,0,2"])
        .assert()
        .code(2)
        .stderr(predicate::str::contains("primitive"));
    spinmcg().args(["arf", "--form", "0,2,0,0"]).assert().code(2).stderr(predicate::str::contains("`2`"));
    spinmcg().args(["witness", "--vector", "1,0,0,0"]).assert().code(2);
    spinmcg().args(["orbit-graph", "--g", "3"]).assert().code(2);
    spinmcg().args(["eval", "--word", "C1", "--format", "dot"]).assert().code(2);
    spinmcg().args(["factor-orth", "--matrix", "/nonexistent/m.json"]).assert().code(2);
}

fn round_trip(dir: &TempDir, name: &str, make: &[&str], check: &[&str]) {
    let cert = stdout_of(make);
    let path = dir.path().join(name);
    fs::write(&path, &cert).unwrap();
    spinmcg().args(check).arg("--check").arg(&path).assert().success();

    // a tampered copy must be rejected, either as malformed or as wrong
    let mut v: Value = serde_json::from_str(&cert).unwrap();
    tamper(&mut v);
    let bad = dir.path().join(format!("bad-{name}"));
    fs::write(&bad, serde_json::to_string(&v).unwrap()).unwrap();
    let out = spinmcg().args(check).arg("--check").arg(&bad).output().unwrap();
    assert_ne!(out.status.code(), Some(0), "tampered {name} accepted");
}

fn tamper(v: &mut Value) {
    match v {
        Value::Object(m) => {
            if let Some(Value::Array(a)) = m.get_mut("output") {
                if let Some(Value::Number(n)) = a.first().cloned() {
                    a[0] = Value::from(n.as_i64().unwrap() + 2);
                    return;
                }
            }
            if let Some(Value::Array(t)) = m.get_mut("tokens") {
                t.push(Value::from("X1"));
                return;
            }
            if let Some(Value::Array(w)) = m.get_mut("word") {
                w.push(w.first().cloned().unwrap_or(Value::from("x1+y1")));
                if w.len() == 1 {
                    w.push(Value::from("x2+y2"));
                }
                return;
            }
            if let Some(Value::Array(c)) = m.get_mut("conjugator") {
                c.push(serde_json::json!({"operand": [1, 0, 0, 0], "exponent": 2}));
            }
        }
        _ => panic!("certificate is not an object"),
    }
}

#[test]
fn certificates_round_trip() {
    let dir = TempDir::new().unwrap();
    round_trip(&dir, "blocks.json", &["reduce-blocks", "--vector", "7,-3,4,9"], &["reduce-blocks"]);
    round_trip(&dir, "delta.json", &["reduce-delta", "--g", "3", "--vector", "5,2,-3,4,1,1"], &["reduce-delta"]);
    round_trip(&dir, "sqtv.json", &["factor-sqtv", "--vector", "-3,2,5,7"], &["factor-sqtv"]);
    round_trip(
        &dir,
        "lambda.json",
        &["lambda-reduce", "--g", "3", "--vector", "1,1,0,1,1,0", "--to-base"],
        &["lambda-reduce"],
    );
    round_trip(&dir, "rewrite.json", &["rewrite", "--word", "C2 C3^-1 C1 C4 C2", "--index", "3"], &["rewrite"]);
    round_trip(&dir, "witness.json", &["witness", "--g", "3", "--vector", "1,1,0,1,1,0"], &["witness"]);
}

#[test]
fn factor_orth_from_matrix_file() {
    let dir = TempDir::new().unwrap();
    let v = json_of(&["eval", "--g", "3", "--mod2", "--word", "X1 T1 D2 Y4 X5^-1"]);
    let path = dir.path().join("m.json");
    fs::write(&path, serde_json::to_string(&v["matrix"]).unwrap()).unwrap();
    let cert = stdout_of(&["factor-orth", "--g", "3", "--matrix", path.to_str().unwrap()]);
    let cert_path = dir.path().join("orth.json");
    fs::write(&cert_path, &cert).unwrap();
    spinmcg().args(["factor-orth", "--check"]).arg(&cert_path).assert().success();

    let rows: Vec<Vec<u8>> = serde_json::from_value(v["matrix"].clone()).unwrap();
    let text: String =
        rows.iter().map(|r| r.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(" ") + "\n").collect();
    let text_path = dir.path().join("m.txt");
    fs::write(&text_path, text).unwrap();
    spinmcg().args(["factor-orth", "--g", "3", "--format", "text", "--matrix"]).arg(&text_path).assert().success();

    let mut bad: Value = serde_json::from_str(&cert).unwrap();
    bad["word"].as_array_mut().unwrap().push(Value::from("x1+y1"));
    let bad_path = dir.path().join("bad.json");
    fs::write(&bad_path, serde_json::to_string(&bad).unwrap()).unwrap();
    spinmcg().args(["factor-orth", "--check"]).arg(&bad_path).assert().code(1);
}

#[test]
fn factor_orth_genus_two_outside_transvection_subgroup() {
    let dir = TempDir::new().unwrap();
    let inside = json_of(&["eval", "--mod2", "--word", "X1 D2 X3^-1"]);
    let outside = json_of(&["eval", "--mod2", "--word", "X1 T D2 X3^-1"]);
    let p_in = dir.path().join("in.json");
    let p_out = dir.path().join("out.json");
    fs::write(&p_in, serde_json::to_string(&inside["matrix"]).unwrap()).unwrap();
    fs::write(&p_out, serde_json::to_string(&outside["matrix"]).unwrap()).unwrap();
    spinmcg().args(["factor-orth", "--matrix"]).arg(&p_in).assert().success();
    spinmcg()
        .args(["factor-orth", "--matrix"])
        .arg(&p_out)
        .assert()
        .code(1)
        .stderr(predicate::str::contains("order 36"));
}

#[test]
fn orbit_graph_dot() {
    let dot = stdout_of(&["orbit-graph"]);
    assert!(dot.starts_with("graph orbit {"));
    assert_eq!(dot.matches("[label=\"[").count(), 10);
    for line in dot.lines().filter(|l| l.contains("--")) {
        let parts: Vec<&str> = line.split_whitespace().collect();
        assert_ne!(parts[0], parts[2], "self-loop in {line}");
    }
}

#[test]
fn schreier_table_text() {
    let t = stdout_of(&["schreier-table", "--format", "text"]);
    assert!(t.contains("Xs2^-1 D4 Xs2"));
    assert_eq!(t.lines().count(), 12);
}

#[test]
fn group_orders_genus_two() {
    let v = json_of(&["group-orders"]);
    assert_eq!(v["symplectic"], 720);
    assert_eq!(v["orthogonal"], 72);
    assert_eq!(v["transvection_subgroup"], 36);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["schreier-table"][..],
        &["orbit-graph"][..],
        &["witness", "--g", "3", "--vector", "0,1,1,0,1,1"][..],
        &["rewrite", "--word", "C5 C2^-1 C3 C3 C1^-1", "--index", "2"][..],
    ] {
        assert_eq!(stdout_of(args), stdout_of(args));
    }
}
