use std::io::Write;
use std::process::{Command, Stdio};

use serde_json::{json, Value};

const J: &str = r#"{"n": 1, "rows": [[[0, 0, 1, 0]]]}"#;

fn run(args: &[&str], stdin: Option<&str>) -> (i32, Value, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_quatjordan"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let value = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {stdout}"));
    (out.status.code().unwrap(), value, stdout)
}

fn close(v: &Value, want: f64) -> bool {
    (v.as_f64().unwrap() - want).abs() < 1e-9
}

#[test]
fn jordan_of_j() {
    let (code, v, _) = run(&["jordan", "--matrix", J], None);
    assert_eq!(code, 0);
    let spec = v["spec"].as_array().unwrap();
    assert_eq!(spec.len(), 1);
    assert!(close(&spec[0]["re"], 0.0) && close(&spec[0]["im"], 1.0));
    assert_eq!(spec[0]["size"], json!(1));
}

#[test]
fn charpoly_of_j_from_stdin() {
    let (code, v, _) = run(&["charpoly"], Some(J));
    assert_eq!(code, 0);
    assert_eq!(v, json!({ "coeffs": [1.0, 0.0, 1.0] }));
}

#[test]
fn exp_of_zero_is_identity() {
    let zero = r#"{"n": 2, "rows": [[[0,0,0,0],[0,0,0,0]],[[0,0,0,0],[0,0,0,0]]]}"#;
    let (code, v, _) = run(&["exp", "--matrix", zero], None);
    assert_eq!(code, 0);
    assert_eq!(v["rows"], json!([[[1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 0.0]], [[0.0, 0.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0]]]));
}

#[test]
fn spectrum_and_adjoint() {
    let (_, v, _) = run(&["spectrum", "--matrix", J], None);
    assert_eq!(v.as_array().unwrap().len(), 1);
    assert_eq!(v[0]["kind"], json!("pair"));
    assert_eq!(v[0]["mult"], json!(1));
    let (_, v, _) = run(&["adjoint", "--matrix", J], None);
    assert_eq!(v["rows"], json!(2));
    assert_eq!(v["entries"], json!([[[0.0, 0.0], [-1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]]));
}

#[test]
fn decompositions() {
    let block = r#"{"n": 2, "rows": [[[0,1,0,0],[1,0,0,0]],[[0,0,0,0],[0,1,0,0]]]}"#;
    let (code, v, _) = run(&["jcd", "--matrix", block], None);
    assert_eq!(code, 0);
    assert!(close(&v["N"]["rows"][0][1][0], 1.0));
    assert!(close(&v["S"]["rows"][0][0][1], 1.0));
    assert!(close(&v["f"][0], 0.0));
    let (code, v, _) = run(&["mjcd", "--matrix", block], None);
    assert_eq!(code, 0);
    assert!(close(&v["U"]["rows"][0][1][1], -1.0));
    assert_eq!(v["h"][0], json!(1.0));
}

#[test]
fn exit_codes() {
    let (code, v, _) = run(&["jordan", "--matrix", "{not json"], None);
    assert_eq!(code, 2);
    assert!(v["error"].is_string());
    let (code, _, _) = run(&["jordan", "--matrix", r#"{"n": 2, "rows": [[[1,0,0,0]]]}"#], None);
    assert_eq!(code, 2);
    let (code, _, _) = run(&["mjcd", "--matrix", r#"{"n": 1, "rows": [[[0,0,0,0]]]}"#], None);
    assert_eq!(code, 1);
    // a residual bound of zero cannot be met by the exp/log round trip
    let m = r#"{"n": 1, "rows": [[[0.3, 0.7, 0.1, 0.2]]]}"#;
    let (code, v, _) = run(&["log", "--tol-residual", "0", "--matrix", m], None);
    assert_eq!(code, 3, "{v}");
}

#[test]
fn gen_is_deterministic_and_checks_pass() {
    let args = ["gen", "--seed", "42", "--spec", r#"[{"re": 0, "im": 1, "size": 2}]"#];
    let (code, first, text1) = run(&args, None);
    assert_eq!(code, 0);
    let (_, _, text2) = run(&args, None);
    assert_eq!(text1, text2);
    assert!(first["cond"].as_f64().unwrap() <= 1e3);

    let (_, jordan, _) = run(&["jordan"], Some(&text1));
    let spec = jordan["spec"].as_array().unwrap();
    assert_eq!(spec.len(), 1);
    assert_eq!(spec[0]["size"], json!(2));
    assert!(close(&spec[0]["im"], 1.0));

    for seed in ["1", "2", "3"] {
        let (_, inst, text) = run(&["gen", "--seed", seed, "--n", "5"], None);
        let (code, report, _) = run(&["check"], Some(&text));
        assert_eq!(code, 0, "{inst} {report}");
        assert_eq!(report["passed"], json!(true));
    }
}

#[test]
fn pretty_output() {
    let (code, v, _) = run(&["exp", "--pretty", "--matrix", J], None);
    assert_eq!(code, 0);
    let cell = v["rows"][0][0].as_str().unwrap();
    assert!(cell.contains('j'), "{cell}");
}

#[test]
fn expjcd_report() {
    let nil = r#"{"n": 2, "rows": [[[0,0,0,0],[1,0,0,0]],[[0,0,0,0],[0,0,0,0]]]}"#;
    let (code, v, _) = run(&["expjcd", "--matrix", nil], None);
    assert_eq!(code, 0);
    assert!(v["residuals"]["exp(N) = U'"].as_f64().unwrap() < 1e-12);
    assert!(v["residuals"]["exp(S) = S'"].as_f64().unwrap() < 1e-12);
}
