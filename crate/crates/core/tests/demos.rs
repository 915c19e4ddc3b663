//! The bundled demos, observed through headless clients.

mod common;

use std::time::Duration;

use common::path;
use scenecast::api::Server;
use scenecast::demos::{self, chain_path, DemoName, CHAIN_LINKS, FRUSTUM_COUNT, POINT_COUNT};
use scenecast::headless::HeadlessClient;
use scenecast::scene::NodeKind;

const WAIT: Duration = Duration::from_secs(10);

#[test]
fn pointcloud_demo_has_points_and_frustums() {
    let server = Server::start("127.0.0.1", 0).unwrap();
    assert!(demos::install(DemoName::PointcloudFrustums, &server).unwrap().is_none());
    let client = HeadlessClient::connect(&server.ws_url()).unwrap();
    assert!(client.wait_until(WAIT, |m| {
        let points = m
            .scene
            .get(&path("/points"))
            .and_then(|n| n.prop("positions"))
            .and_then(|v| v.as_f32_slice())
            .map_or(0, |p| p.len() / 3);
        let frustums = m.scene.iter().filter(|(_, n)| n.kind == NodeKind::CameraFrustum).count();
        points == POINT_COUNT && frustums == FRUSTUM_COUNT
    }));
}

#[test]
fn kinematic_chain_late_joiner_matches_early_client() {
    let server = Server::start("127.0.0.1", 0).unwrap();
    let mut animator = demos::install(DemoName::KinematicChain, &server).unwrap().unwrap();
    let early = HeadlessClient::connect(&server.ws_url()).unwrap();
    std::thread::sleep(Duration::from_secs(10));
    let late = HeadlessClient::connect(&server.ws_url()).unwrap();
    std::thread::sleep(Duration::from_millis(200));
    animator.stop();
    let tip = path(&chain_path(CHAIN_LINKS - 1));
    let server_tip = server.scene().get(tip.as_str()).unwrap().unwrap().world_transform().unwrap();
    let server_state = common::server_state(&server);
    for client in [&early, &late] {
        assert!(client.wait_until(WAIT, |m| m.canonical_state() == server_state));
        let mirror_tip = client.with_mirror(|m| m.scene.world_transform(&tip).unwrap());
        assert_eq!(mirror_tip, server_tip);
    }
    assert!(early.stats().frames_received > 100);
}

