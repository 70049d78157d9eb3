use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pertinv"))
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures/v1")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json_of(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn lens_output() {
    let v = json_of(&run(&["lens", "-p", "3", "-q", "1", "--n-max", "2"]));
    assert_eq!(v["S"], serde_json::json!(["0", "-1/3", "1/54"]));
    assert_eq!(v["ord_h1"], 3);
    assert_eq!(v["lambda_cw"], "-1/18");
}

#[test]
fn output_is_byte_identical() {
    let a = run(&["surgery", &fixture("borromean.json")]);
    let b = run(&["surgery", &fixture("borromean.json")]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn surgery_on_the_borromean_fixture() {
    let v = json_of(&run(&[
        "surgery",
        &fixture("borromean.json"),
        "--n-max",
        "1",
    ]));
    // q = (2, -1, 3)
    assert_eq!(v["S"][1], "-72");
    assert_eq!(v["delta"].as_array().unwrap().len(), 2);
}

#[test]
fn knot_fixture_through_a_presentation() {
    let v = json_of(&run(&["hoste", &fixture("trefoil_plus1.json")]));
    assert_eq!(v["S1"], "12");
    assert_eq!(v["match"], true);
}

#[test]
fn finite_type_verbs() {
    let v = json_of(&run(&["diagram-sum", &fixture("borromean.json")]));
    assert_eq!(v["match"], true);
    assert_eq!(v["diagram_sum"], "72");
    let v = json_of(&run(&["alt-sum", &fixture("borromean_unknot.json")]));
    assert_eq!(v["alternating_sum"], "0");
    let v = json_of(&run(&["shift-sum", "-p", "2", "-q", "3", "-n", "2"]));
    assert_eq!(v["value"], "1/4");
    assert_eq!(v["match"], true);
    let v = json_of(&run(&[
        "shift-sum",
        "-p",
        "1",
        "-q",
        "3",
        "-n",
        "1",
        "--level",
        "invariant",
    ]));
    assert_eq!(v["value"], "0");
    assert_eq!(v["q_minus_6d"], "2");
}

#[test]
fn integerize_verb() {
    let v = json_of(&run(&["integerize", "-p", "3", "-q", "1", "-n", "1"]));
    assert_eq!(v["S_int"], "-5806080");
    assert_eq!(v["integral"], true);
    assert_eq!(v["denominator_check"]["passed"], true);
}

#[test]
fn rt_eval_csv() {
    let out = run(&[
        "rt-eval",
        "--surgeries",
        "1/1",
        "--k-min",
        "1",
        "--k-max",
        "3",
        "--precision",
        "6",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,K,re,im,residual");
    assert_eq!(lines.len(), 4);
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(fields[..2], ["1", "3"]);
    // Z(S^3; K=3) = sqrt(2/3) sin(π/3) = 0.707107
    assert_eq!(fields[2], "7.07107e-1");
}

#[test]
fn selfcheck_passes() {
    let v = json_of(&run(&["selfcheck"]));
    assert!(v.as_object().unwrap().values().all(|s| s["passed"] == true));
}

#[test]
fn validation_errors_exit_with_one() {
    let out = run(&["lens", "-p", "0", "-q", "1"]);
    assert_eq!(out.status.code(), Some(1));

    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(
        f,
        "{{\"class\": \"ASL\",\n \"components\": [{{\"p\": 1, \"q\": \"x\"}}], \"n_max\": 1}}"
    )
    .unwrap();
    let out = run(&["surgery", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "{err}");

    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(
        f,
        r#"{{"class":"BL","components":[{{"p":1,"q":1}},{{"p":1,"q":1}}],
            "jones_fixture":{{"N":2,"class":"BL","order":2,
              "entries":[{{"n":0,"multi":[0,0],"value":1}},{{"n":-1,"multi":[1,1],"value":"2/3"}}]}},
            "n_max":1}}"#
    )
    .unwrap();
    let out = run(&["surgery", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(
        String::from_utf8_lossy(&out.stderr).contains("[1, 1]"),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn reads_standard_input() {
    let mut child = bin()
        .args(["surgery", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(br#"{"class":"BL","components":[{"p":2,"q":1}],"n_max":2}"#)
        .unwrap();
    let out = child.wait_with_output().unwrap();
    let v = json_of(&out);
    assert_eq!(v["S"], serde_json::json!(["0", "0", "1/24"]));
}
