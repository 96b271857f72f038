use std::io::Write;
use std::process::{Command, Output, Stdio};
use std::sync::Arc;

use axum::body::Body;
use axum::http::Request;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use lattice_cli::server::{router, AppState};

fn lattice(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lattice"))
        .args(args)
        .output()
        .unwrap()
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_lattice"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn classify_prints_verdict_and_grid() {
    let o = lattice(&["classify", ".xxx\n.xxx\n.xxx\nx..."]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(
        text.starts_with("SEPARABLE, covering with M = 2 and N_Q = 5"),
        "{text}"
    );
    assert!(text.contains("0 1 2 3"));
}

#[test]
fn classify_reads_stdin() {
    let o = with_stdin(&["classify", "--json"], "..xx\nx..x\n.x.x\n....\n");
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["result"]["verdict"], "PPT_ENTANGLED");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["classify", "x..\n...\n..."],
        vec!["classify", "0x0000"],
        vec!["quadruples", "(4,0)"],
        vec!["witness", "0x0001", "--family", "delta", "--delta", "one"],
        vec!["frobnicate"],
    ] {
        let o = lattice(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn unwritable_output_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    let out = blocker.join("sub");
    let o = lattice(&[
        "census",
        "--orbits",
        "--no-spectral",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
    let o = lattice(&[
        "serve",
        "--census",
        dir.path().join("missing.json").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn busy_port_exits_four() {
    let held = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
    let port = held.local_addr().unwrap().port().to_string();
    let o = lattice(&["serve", "--port", &port]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn census_writes_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = lattice(&["census", "--orbits", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("spectral agreement 65535/65535"), "{text}");
    let v: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("census.json")).unwrap())
            .unwrap();
    assert_eq!(v["summary"]["totals"]["NPT_ENTANGLED"], 54112);
    assert_eq!(v["summary"]["totals"]["UNDECIDED"], 960);
    assert_eq!(v["summary"]["orbits"], 316);
    let csv = std::fs::read_to_string(dir.path().join("census.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("canonical_mask,N_I,verdict,ppt,ppt2,ppt3"));
    assert_eq!(lines.count(), 316);
}

async fn api_result(uri: &str, body: Value) -> Value {
    let req = Request::post(uri)
        .header("content-type", "application/json")
        .body(Body::from(body.to_string()))
        .unwrap();
    let resp = router(Arc::new(AppState::default()))
        .oneshot(req)
        .await
        .unwrap();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let v: Value = serde_json::from_slice(&bytes).unwrap();
    v["result"].clone()
}

fn cli_result(args: &[&str]) -> Value {
    let o = lattice(args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    v["result"].clone()
}

#[tokio::test]
async fn cli_and_api_results_agree() {
    for pattern in [
        ".xxx\n.xxx\n.xxx\nx...",
        "0x9b77",
        "x..x\n.xx.\nxx.x\nxx.x",
        "(0,0) (1,1)",
    ] {
        let cli = cli_result(&["classify", pattern, "--json", "--spectral"]);
        let api = api_result("/classify", json!({ "pattern": pattern, "spectral": true })).await;
        assert_eq!(
            serde_json::to_string(&cli).unwrap(),
            serde_json::to_string(&api).unwrap(),
            "{pattern}"
        );
    }
    let cli = cli_result(&[
        "witness",
        "..xx\nx..x\n.x.x\n....",
        "--family",
        "gamma",
        "--t",
        "0.05",
        "--no-sup",
    ]);
    let api = api_result(
        "/witness",
        json!({ "pattern": "..xx\nx..x\n.x.x\n....", "family": "gamma", "params": { "t": 0.05, "sup": false } }),
    )
    .await;
    assert_eq!(
        serde_json::to_string(&cli).unwrap(),
        serde_json::to_string(&api).unwrap()
    );
}
