//! The `scenecast` binary: exit codes, schema codegen, demos and the
//! headless subcommand.

use std::io::{Read, Write};
use std::net::{TcpListener, TcpStream};
use std::path::PathBuf;
use std::process::{Child, Command, Output, Stdio};
use std::time::{Duration, Instant};

use scenecast::api::{BoxParams, Server};
use scenecast::headless::HeadlessClient;
use scenecast::schema::builtin_client_declarations;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_scenecast"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("scenecast-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn free_port() -> u16 {
    TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port()
}

struct KillOnDrop(Child);

impl Drop for KillOnDrop {
    fn drop(&mut self) {
        let _ = self.0.kill();
        let _ = self.0.wait();
    }
}

fn healthz(port: u16) -> Option<String> {
    let mut s = TcpStream::connect(("127.0.0.1", port)).ok()?;
    write!(s, "GET /healthz HTTP/1.1\r\nHost: localhost\r\nConnection: close\r\n\r\n").ok()?;
    let mut out = String::new();
    s.read_to_string(&mut out).ok()?;
    Some(out)
}

#[test]
fn no_args_prints_usage_and_exits_2() {
    let o = run(&[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Usage"));
}

#[test]
fn unknown_subcommand_or_flag_exits_2() {
    for args in [&["teleport"][..], &["gen-schema", "x.d.ts", "--frobnicate"], &["demo", "nope"]] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).to_lowercase().contains("error"), "{args:?}");
    }
}

#[test]
fn help_documents_every_subcommand() {
    let o = run(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for word in ["demo", "gen-schema", "headless"] {
        assert!(text.contains(word), "{word} missing from help");
    }
    let demo = stdout(&run(&["demo", "--help"]));
    assert!(demo.contains("--host") && demo.contains("--port"));
    assert!(stdout(&run(&["gen-schema", "--help"])).contains("--check"));
    let connect = stdout(&run(&["headless", "connect", "--help"]));
    assert!(connect.contains("--dump-state") && connect.contains("--rtt"));
}

#[test]
fn gen_schema_writes_then_checks() {
    let dir = scratch("gen");
    let out = dir.join("nested/messages.d.ts");
    let out_s = out.to_str().unwrap();
    assert_eq!(run(&["gen-schema", out_s]).status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), builtin_client_declarations());
    assert_eq!(run(&["gen-schema", out_s, "--check"]).status.code(), Some(0));

    std::fs::write(&out, "// old\n").unwrap();
    let stale = run(&["gen-schema", out_s, "--check"]);
    assert_eq!(stale.status.code(), Some(1));
    assert!(stderr(&stale).contains("stale"));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "// old\n");

    let missing = dir.join("absent.d.ts");
    assert_eq!(run(&["gen-schema", missing.to_str().unwrap(), "--check"]).status.code(), Some(1));
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn demo_serves_on_requested_port() {
    let port = free_port();
    let child = bin()
        .args(["demo", "slider_double", "--port", &port.to_string()])
        .stdout(Stdio::null())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    let _guard = KillOnDrop(child);
    let deadline = Instant::now() + Duration::from_secs(10);
    let health = loop {
        if let Some(h) = healthz(port) {
            break h;
        }
        assert!(Instant::now() < deadline, "demo never came up on {port}");
        std::thread::sleep(Duration::from_millis(20));
    };
    assert!(health.ends_with("ok"));
    let client = HeadlessClient::connect(&format!("ws://127.0.0.1:{port}/ws")).unwrap();
    assert!(client.wait_until(Duration::from_secs(5), |m| m.gui.len() == 2));
}

#[test]
fn demo_on_occupied_port_fails_naming_the_address() {
    let holder = TcpListener::bind("127.0.0.1:0").unwrap();
    let port = holder.local_addr().unwrap().port();
    let o = run(&["demo", "counter", "--port", &port.to_string()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains(&format!("127.0.0.1:{port}")), "{}", stderr(&o));
}

#[test]
fn headless_connect_dumps_canonical_state() {
    let server = Server::start("127.0.0.1", 0).unwrap();
    server.scene().add_box("/box", BoxParams::default()).unwrap().set_color([255, 0, 0]).unwrap();
    server.gui().add_button("Click").unwrap();
    let reference = HeadlessClient::connect(&server.ws_url()).unwrap();
    assert!(reference.wait_until(Duration::from_secs(5), |m| m.gui.len() == 1));

    let o = run(&["headless", "connect", &server.ws_url(), "--dump-state", "--rtt", "20"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), reference.canonical_state());

    let summary = run(&["headless", "connect", &server.ws_url()]);
    assert_eq!(summary.status.code(), Some(0));
    assert!(stdout(&summary).contains("gui elements 1"));
}

#[test]
fn headless_connect_to_nothing_fails() {
    let port = free_port();
    let o = run(&["headless", "connect", &format!("ws://127.0.0.1:{port}/ws")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).to_lowercase().contains("error"));
}
