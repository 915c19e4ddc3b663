//! End-to-end behavior over real sockets, observed through headless clients.

mod common;

use std::collections::{BTreeSet, HashSet};
use std::io::{Read, Write};
use std::net::TcpStream;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use common::path;
use scenecast::api::{ApiError, BoxParams, CameraFrustumParams, CameraState, PointCloudParams, Server};
use scenecast::demos;
use scenecast::headless::{ClientMirror, ConnectOptions, HeadlessClient, HeadlessError, MirrorError};
use scenecast::scene::Pose;
use scenecast::schema::{builtin_schema_hash, Value};
use scenecast::transport::{redundancy_key, Scope, TransportError};

const WAIT: Duration = Duration::from_secs(5);

fn start() -> Server {
    Server::start("127.0.0.1", 0).expect("server starts")
}

fn connect(server: &Server) -> HeadlessClient {
    HeadlessClient::connect(&server.ws_url()).expect("client connects")
}

fn eventually(mut f: impl FnMut() -> bool) -> bool {
    let deadline = Instant::now() + WAIT;
    while Instant::now() < deadline {
        if f() {
            return true;
        }
        std::thread::sleep(Duration::from_millis(5));
    }
    f()
}

fn http_get(server: &Server, route: &str) -> String {
    let mut stream = TcpStream::connect(server.local_addr()).unwrap();
    write!(stream, "GET {route} HTTP/1.1\r\nHost: localhost\r\nConnection: close\r\n\r\n").unwrap();
    let mut out = String::new();
    stream.read_to_string(&mut out).unwrap();
    out
}

fn text_value(client: &HeadlessClient, uid: u64) -> Option<Value> {
    client.with_mirror(|m| m.gui.get(uid).and_then(|e| e.value.clone()))
}

// ── http ─────────────────────────────────────────────────────

#[test]
fn healthz_and_index_are_served() {
    let server = start();
    let health = http_get(&server, "/healthz");
    assert!(health.starts_with("HTTP/1.1 200"), "{health}");
    assert!(health.ends_with("ok"), "{health}");
    let index = http_get(&server, "/");
    assert!(index.starts_with("HTTP/1.1 200"));
    assert!(index.to_ascii_lowercase().contains("text/html"));
}

#[test]
fn occupied_port_is_a_bind_error_naming_the_address() {
    let first = start();
    let port = first.local_addr().port();
    match Server::start("127.0.0.1", port) {
        Err(ApiError::Transport(e @ TransportError::Bind { .. })) => {
            assert!(e.to_string().contains(&format!("127.0.0.1:{port}")), "{e}");
        }
        other => panic!("expected bind error, got {:?}", other.map(|s| s.local_addr())),
    }
}

// ── handshake ────────────────────────────────────────────────

#[test]
fn empty_server_gives_empty_mirror() {
    let server = start();
    let client = connect(&server);
    assert_eq!(client.client_id(), 1);
    assert_eq!(client.canonical_state(), ClientMirror::new().canonical_state());
}

#[test]
fn mismatched_hash_is_rejected_with_both_hashes() {
    let server = start();
    let options = ConnectOptions {
        schema_hash: Some("deadbeef".into()),
        ..Default::default()
    };
    match HeadlessClient::connect_with(&server.ws_url(), options) {
        Err(HeadlessError::Mirror(MirrorError::Rejected {
            server_hash,
            client_hash,
            ..
        })) => {
            assert_eq!(server_hash, builtin_schema_hash());
            assert_eq!(client_hash, "deadbeef");
        }
        other => panic!("expected reject, got {:?}", other.map(|c| c.client_id())),
    }
    assert!(server.list_clients().is_empty());
}

#[test]
fn concurrent_connects_get_distinct_ids() {
    let server = start();
    let url = server.ws_url();
    let handles: Vec<_> = (0..8)
        .map(|_| {
            let url = url.clone();
            std::thread::spawn(move || HeadlessClient::connect(&url).unwrap())
        })
        .collect();
    let clients: Vec<HeadlessClient> = handles.into_iter().map(|h| h.join().unwrap()).collect();
    let ids: BTreeSet<u64> = clients.iter().map(HeadlessClient::client_id).collect();
    assert_eq!(ids, (1..=8).collect());
}

#[test]
fn client_list_tracks_connections() {
    let server = start();
    let disconnected = Arc::new(Mutex::new(Vec::new()));
    let seen = disconnected.clone();
    let _sub = server.on_client_disconnect(move |id| seen.lock().unwrap().push(id));
    let mut one = connect(&server);
    let _two = connect(&server);
    let ids = |s: &Server| s.list_clients().iter().map(|c| c.id()).collect::<Vec<_>>();
    assert!(eventually(|| ids(&server) == [1, 2]));
    one.close();
    assert!(eventually(|| ids(&server) == [2]));
    assert!(eventually(|| *disconnected.lock().unwrap() == [1]));
}

// ── scene ────────────────────────────────────────────────────

#[test]
fn box_color_converges_on_every_mirror() {
    let server = start();
    let a = connect(&server);
    let cube = server.scene().add_box("/box", BoxParams::default()).unwrap();
    let b = connect(&server);
    cube.set_color([255, 0, 0]).unwrap();
    assert_eq!(cube.prop("color").unwrap(), Some(Value::from([255u8, 0, 0])));
    let red = |m: &ClientMirror| m.scene.get(&path("/box")).and_then(|n| n.prop("color").cloned()) == Some([255u8, 0, 0].into());
    assert!(a.wait_until(WAIT, red));
    assert!(b.wait_until(WAIT, red));
    assert!(a.wait_until(WAIT, |m| m.canonical_state() == b.canonical_state()));
}

#[test]
fn add_then_color_persists_two_keys() {
    let server = start();
    let cube = server.scene().add_box("/box", BoxParams::default()).unwrap();
    cube.set_color([255, 0, 0]).unwrap();
    let keys = server.inspect(|hub| {
        hub.global_buffer()
            .iter()
            .map(|w| redundancy_key(w).unwrap())
            .collect::<HashSet<_>>()
    });
    assert_eq!(keys.len(), 2);
    assert_eq!(server.inspect(|hub| hub.global_buffer().len()), 2);
}

#[test]
fn use_after_remove_is_an_error() {
    let server = start();
    let cube = server.scene().add_box("/box", BoxParams::default()).unwrap();
    cube.remove().unwrap();
    assert!(matches!(cube.set_color([1, 2, 3]), Err(ApiError::UseAfterRemove(_))));
    assert!(matches!(cube.pose(), Err(ApiError::UseAfterRemove(_))));
    assert!(server.scene().get("/box").unwrap().is_none());
}

#[test]
fn point_cloud_and_frustum_reach_all_mirrors() {
    let server = start();
    let a = connect(&server);
    let (positions, colors) = demos::synthetic_cloud(1000, 3);
    server
        .scene()
        .add_point_cloud(
            "/points",
            PointCloudParams {
                positions: positions.clone(),
                colors,
                ..Default::default()
            },
        )
        .unwrap();
    server
        .scene()
        .add_camera_frustum(
            "/camera",
            CameraFrustumParams {
                fov: std::f64::consts::FRAC_PI_2,
                ..Default::default()
            },
        )
        .unwrap();
    let b = connect(&server);
    for client in [&a, &b] {
        assert!(client.wait_until(WAIT, |m| {
            m.scene.get(&path("/points")).and_then(|n| n.prop("positions").cloned()) == Some(positions.clone().into())
                && m.scene.get(&path("/camera")).and_then(|n| n.prop("fov").cloned())
                    == Some(std::f64::consts::FRAC_PI_2.into())
        }));
    }
}

#[test]
fn node_clicks_reach_callbacks_only_when_clickable() {
    let server = start();
    let clicks = Arc::new(AtomicUsize::new(0));
    let c = clicks.clone();
    let cube = server.scene().add_box("/box", BoxParams::default()).unwrap();
    let _sub = cube
        .on_click(move |e| {
            assert!((e.ray_direction.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-9);
            c.fetch_add(1, Ordering::SeqCst);
        })
        .unwrap();
    server.scene().add_box("/inert", BoxParams::default()).unwrap();
    let client = connect(&server);
    assert!(client.wait_until(WAIT, |m| m.scene.get(&path("/box")).is_some_and(|n| n.clickable)));
    client.click_node(&path("/inert"), [0.0; 3], [0.0, 0.0, 1.0]).unwrap();
    client.click_node(&path("/box"), [0.0; 3], [0.0, 0.0, 0.0]).unwrap();
    client.click_node(&path("/box"), [0.0, 0.0, 5.0], [0.0, 0.0, -3.0]).unwrap();
    assert!(eventually(|| clicks.load(Ordering::SeqCst) == 1));
    std::thread::sleep(Duration::from_millis(100));
    assert_eq!(clicks.load(Ordering::SeqCst), 1);
}

// ── gui ──────────────────────────────────────────────────────

#[test]
fn slider_21_gives_42_on_every_mirror() {
    let server = start();
    let (slider, text) = demos::slider_double(&server).unwrap();
    let a = connect(&server);
    let b = connect(&server);
    a.send_gui_update(slider.uid(), 21.0.into()).unwrap();
    assert!(eventually(|| text.value_string().ok().as_deref() == Some("42")));
    for client in [&a, &b] {
        assert!(client.wait_until(WAIT, |m| m.gui.get(text.uid()).and_then(|e| e.value.clone())
            == Some("42".into())));
    }
    assert_eq!(text_value(&b, slider.uid()), Some(21.0.into()));
}

#[test]
fn three_clicks_count_three() {
    let server = start();
    let (button, label) = demos::counter(&server).unwrap();
    let client = connect(&server);
    for _ in 0..3 {
        client.click_button(button.uid()).unwrap();
    }
    assert!(client.wait_until(WAIT, |m| m.gui.get(label.uid()).and_then(|e| e.prop("content").cloned())
        == Some("Count: 3".into())));
    assert_eq!(label.prop("content").unwrap(), Some("Count: 3".into()));
}

#[test]
fn server_writes_trigger_no_callbacks() {
    let server = start();
    let calls = Arc::new(AtomicUsize::new(0));
    let slider = server.gui().add_slider("Value", 0.0, 100.0, 1.0, 0.0).unwrap();
    let c = calls.clone();
    let _sub = slider.on_update(move |_| {
        c.fetch_add(1, Ordering::SeqCst);
    });
    let client = connect(&server);
    for v in 1..=20 {
        slider.set_value(v as f64).unwrap();
    }
    assert!(client.wait_until(WAIT, |m| m.gui.get(slider.uid()).and_then(|e| e.value.clone()) == Some(20.0.into())));
    std::thread::sleep(Duration::from_millis(100));
    assert_eq!(calls.load(Ordering::SeqCst), 0);
    client.send_gui_update(slider.uid(), 5.0.into()).unwrap();
    assert!(eventually(|| calls.load(Ordering::SeqCst) == 1));
}

#[test]
fn out_of_range_update_is_clamped_before_callbacks() {
    let server = start();
    let slider = server.gui().add_slider("Value", 0.0, 100.0, 1.0, 0.0).unwrap();
    let seen = Arc::new(Mutex::new(Vec::new()));
    let s = seen.clone();
    let _sub = slider.on_update(move |e| s.lock().unwrap().push(e.value.clone()));
    let client = connect(&server);
    client.send_gui_update(slider.uid(), 150.0.into()).unwrap();
    assert!(eventually(|| seen.lock().unwrap().len() == 1));
    assert_eq!(seen.lock().unwrap()[0], Value::Float(100.0));
    assert_eq!(slider.value_f64().unwrap(), 100.0);
}

#[test]
fn callbacks_fire_in_registration_order() {
    let server = start();
    let button = server.gui().add_button("Click").unwrap();
    let order = Arc::new(Mutex::new(Vec::new()));
    let subs: Vec<_> = ["first", "second"]
        .into_iter()
        .map(|name| {
            let order = order.clone();
            button.on_click(move |_| order.lock().unwrap().push(name)).unwrap()
        })
        .collect();
    let client = connect(&server);
    client.click_button(button.uid()).unwrap();
    assert!(eventually(|| order.lock().unwrap().len() == 2));
    assert_eq!(*order.lock().unwrap(), ["first", "second"]);
    drop(subs);
}

#[test]
fn updates_for_removed_elements_are_dropped() {
    let server = start();
    let button = server.gui().add_button("Click").unwrap();
    let calls = Arc::new(AtomicUsize::new(0));
    let c = calls.clone();
    let _sub = button.on_click(move |_| {
        c.fetch_add(1, Ordering::SeqCst);
    });
    let client = connect(&server);
    button.remove().unwrap();
    client.click_button(button.uid()).unwrap();
    std::thread::sleep(Duration::from_millis(100));
    assert_eq!(calls.load(Ordering::SeqCst), 0);
    assert!(matches!(button.value(), Err(ApiError::UseAfterRemove(_))));
    assert!(server.list_clients().len() == 1);
}

// ── per-client state ─────────────────────────────────────────

#[test]
fn per_client_box_is_invisible_to_others() {
    let server = start();
    let _sub = server.on_client_connect(|client| {
        if client.id() == 1 {
            client.scene().add_box("/mine", BoxParams::default()).unwrap();
        }
    });
    let one = connect(&server);
    let two = connect(&server);
    assert!(one.wait_until(WAIT, |m| m.scene.contains(&path("/mine"))));
    server.scene().add_box("/shared", BoxParams::default()).unwrap();
    assert!(two.wait_until(WAIT, |m| m.scene.contains(&path("/shared"))));
    assert!(!two.with_mirror(|m| m.scene.contains(&path("/mine"))));
    let three = connect(&server);
    assert!(three.wait_until(WAIT, |m| m.scene.contains(&path("/shared"))));
    assert!(!three.with_mirror(|m| m.scene.contains(&path("/mine"))));
    assert!(server.inspect(|hub| hub.scene(Scope::Broadcast).unwrap().get(&path("/mine")).is_none()));
}

#[test]
fn camera_reports_and_sets_round_trip() {
    let server = start();
    let client = connect(&server);
    let handle = server.client(client.client_id()).unwrap();
    assert_eq!(handle.camera().unwrap(), None);

    let reported = CameraState::new(Pose::from_position([1.0, 2.0, 3.0]).unwrap(), 1.0, 1.5, [0.0; 3]).unwrap();
    client.report_camera(reported);
    assert!(eventually(|| handle.camera().ok().flatten() == Some(reported)));

    let pushed = CameraState::new(Pose::IDENTITY, std::f64::consts::FRAC_PI_3, 2.0, [0.0, 0.0, -1.0]).unwrap();
    handle.set_camera(pushed).unwrap();
    assert!(client.wait_until(WAIT, |m| m.camera.is_some_and(|c| c.fov == std::f64::consts::FRAC_PI_3)));
    assert_eq!(handle.camera().unwrap(), Some(pushed));
}

#[test]
fn camera_on_disconnected_client_is_an_error() {
    let server = start();
    let mut client = connect(&server);
    let handle = server.client(client.client_id()).unwrap();
    client.close();
    assert!(eventually(|| !handle.is_connected()));
    assert!(handle.set_camera(CameraState::new(Pose::IDENTITY, 1.0, 1.0, [0.0; 3]).unwrap()).is_err());
    assert!(handle.camera().is_err());
}
