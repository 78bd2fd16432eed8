use serde_json::{json, Value};
use std::io::Write;
use std::process::{Command, Stdio};

fn run_bin(args: &[&str], stdin: &str) -> (i32, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_polydyn"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn binary");
    child.stdin.as_mut().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn request(command: &str, params: Value) -> String {
    json!({"command": command, "params": params}).to_string()
}

#[test]
fn chebyshev_request_succeeds() {
    let (code, out) = run_bin(&[], &request("cheb", json!({"m": 2})));
    assert_eq!(code, 0, "{out}");
    let body: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(body["claim"], "cheb");
    assert_eq!(body["data"]["poly"]["coeffs"], json!(["-1", "0", "2"]));
}

#[test]
fn symmetry_request_reports_group() {
    let (code, out) = run_bin(&[], &request("symmetry", json!({"poly": "z^3 + z"})));
    assert_eq!(code, 0, "{out}");
    let body: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(body["data"]["order"], 2);
    assert_eq!(body["data"]["s_residue"], 1);
}

#[test]
fn negative_and_error_exit_codes() {
    // A well-posed question with answer "no" exits 2.
    let (code, out) = run_bin(
        &[],
        &request("conjugate", json!({"A": "z^2 + 1", "B": "z^2 + 2"})),
    );
    assert_eq!(code, 2, "{out}");
    let body: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(body["error"]["class"], "negative");

    // Malformed JSON exits 64.
    let (code, _) = run_bin(&[], "{not json");
    assert_eq!(code, 64);

    // Unknown commands exit 64.
    let (code, _) = run_bin(&[], &request("frobnicate", json!({})));
    assert_eq!(code, 64);

    // Unknown top-level fields are rejected.
    let (code, _) = run_bin(&[], r#"{"command":"cheb","params":{"m":2},"extra":1}"#);
    assert_eq!(code, 64);

    // Unknown flags exit 64.
    let (code, _) = run_bin(&["--no-such-flag"], "");
    assert_eq!(code, 64);
}

#[test]
fn resource_exits() {
    // A truncated orbit search exits 75 and says so.
    let req = json!({
        "command": "curve.orbit",
        "params": {"A1": "z^7 + z^2", "A2": "z^7 + z^2", "mu": "zeta5*z"},
        "limits": {"step_bound": 1}
    });
    let (code, out) = run_bin(&[], &req.to_string());
    assert_eq!(code, 75, "{out}");

    // Exceeding the degree cap exits 75.
    let (code, out) = run_bin(
        &["--degree-cap", "64"],
        &request("iterate", json!({"P": "z^2", "k": 12})),
    );
    assert_eq!(code, 75, "{out}");

    // A wider cap admits the same request.
    let (code, _) = run_bin(
        &["--degree-cap", "5000"],
        &request("iterate", json!({"P": "z^2", "k": 12})),
    );
    assert_eq!(code, 0);
}

#[test]
fn file_input_output() {
    let dir = tempfile::tempdir().unwrap();
    let inp = dir.path().join("req.json");
    let outp = dir.path().join("resp.json");
    std::fs::write(&inp, request("cheb", json!({"m": 3}))).unwrap();
    let (code, _) = run_bin(
        &["--input", inp.to_str().unwrap(), "--output", outp.to_str().unwrap()],
        "",
    );
    assert_eq!(code, 0);
    let body: Value = serde_json::from_str(&std::fs::read_to_string(&outp).unwrap()).unwrap();
    assert_eq!(body["data"]["poly"]["coeffs"], json!(["0", "-3", "0", "4"]));
}

#[test]
fn batch_mode_reports_per_item_status() {
    let batch = json!([
        {"command": "cheb", "params": {"m": 2}},
        {"command": "conjugate", "params": {"A": "z^2 + 1", "B": "z^2 + 2"}},
        {"command": "frobnicate", "params": {}}
    ]);
    let (code, out) = run_bin(&[], &batch.to_string());
    assert_eq!(code, 0, "{out}");
    let body: Value = serde_json::from_str(&out).unwrap();
    let items = body.as_array().unwrap();
    assert_eq!(items.len(), 3);
    assert_eq!(items[0]["status"], 0);
    assert_eq!(items[1]["status"], 2);
    assert_eq!(items[2]["status"], 64);
}

#[test]
fn determinism_across_runs() {
    let req = request("semiconj.up", json!({"A": "z^2 - 2*z"}));
    let (c1, o1) = run_bin(&[], &req);
    let (c2, o2) = run_bin(&[], &req);
    assert_eq!(c1, 0);
    assert_eq!(c1, c2);
    assert_eq!(o1, o2, "output must be byte-identical across runs");
    // An explicit seed changes nothing: all computation is deterministic.
    let (c3, o3) = run_bin(&["--seed", "42"], &req);
    assert_eq!(c3, 0);
    assert_eq!(o1, o3);
}

#[test]
fn certificates_survive_recheck_round_trip() {
    for (cmd, params) in [
        ("cheb", json!({"m": 4})),
        ("semiconj.verify", json!({"A": "z*(z+1)^2", "B": "z^3 + z", "X": "z^2"})),
        ("curve.bound", json!({"A1": "z^3 + z", "A2": "z^3 + z"})),
    ] {
        let (code, out) = run_bin(&[], &request(cmd, params));
        assert_eq!(code, 0, "{out}");
        let cert: Value = serde_json::from_str(&out).unwrap();
        let (code, out) = run_bin(&[], &request("recheck", json!({"certificate": cert})));
        assert_eq!(code, 0, "{out}");
        let body: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(body["data"]["valid"], true);
    }
}

#[test]
fn recheck_rejects_tampering() {
    let (code, out) = run_bin(
        &[],
        &request("semiconj.verify", json!({"A": "z*(z+1)^2", "B": "z^3 + z", "X": "z^2"})),
    );
    assert_eq!(code, 0, "{out}");
    let mut cert: Value = serde_json::from_str(&out).unwrap();
    let ids = cert["identities"].as_array_mut().expect("identities present");
    assert!(!ids.is_empty());
    ids[0]["lhs"] = json!({"poly": {"coeffs": ["1", "0", "0", "0", "0", "0", "1"]}});
    let (code, out) = run_bin(&[], &request("recheck", json!({"certificate": cert})));
    assert_eq!(code, 2, "{out}");
    let body: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(body["data"]["valid"], false);
}

#[test]
fn help_and_version_exit_zero() {
    let (code, out) = run_bin(&["--help"], "");
    assert_eq!(code, 0);
    assert!(out.contains("--input"));
    let (code, _) = run_bin(&["--version"], "");
    assert_eq!(code, 0);
}
