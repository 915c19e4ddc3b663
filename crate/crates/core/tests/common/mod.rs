//! Shared fixtures: a sans-IO harness that drives a `Hub` and feeds
//! headless mirrors through the real codec, plus a random op generator.

#![allow(dead_code)]

pub mod trees;
pub mod wires;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use scenecast::gui::{base_props, GuiKind, Uid, ROOT_CONTAINER};
use scenecast::headless::ClientMirror;
use scenecast::protocol::Wire;
use scenecast::scene::{NodeKind, Pose, SceneNode, ScenePath};
use scenecast::schema::{builtin_schema_hash, decode_batch, Props, Value};
use scenecast::transport::{encode_frame, Hub, Scope};

pub fn path(s: &str) -> ScenePath {
    ScenePath::parse(s).unwrap()
}

pub fn hello() -> Wire {
    Wire::Hello {
        schema_hash: builtin_schema_hash().to_owned(),
    }
}

pub fn label(text: &str) -> SceneNode {
    let mut props = Props::new();
    props.insert("text".into(), text.into());
    SceneNode::new(NodeKind::Label, props)
}

pub fn cube(color: [u8; 3]) -> SceneNode {
    let mut props = Props::new();
    props.insert("dimensions".into(), Value::vec3([1.0, 1.0, 1.0]));
    props.insert("color".into(), color.into());
    props.insert("wireframe".into(), false.into());
    SceneNode::new(NodeKind::Box, props)
}

/// A client attached to a sans-IO hub. Frames go through encode/decode.
pub struct SimClient {
    pub id: u64,
    pub mirror: ClientMirror,
    /// Batches sent but not yet acknowledged, oldest first.
    pub unacked: Vec<u64>,
    pub frames: u64,
    pub messages: u64,
    pub max_outstanding: usize,
}

impl SimClient {
    pub fn connect(hub: &mut Hub) -> SimClient {
        let id = hub.handshake(&hello()).expect("handshake");
        SimClient {
            id,
            mirror: ClientMirror::new(),
            unacked: Vec::new(),
            frames: 0,
            messages: 0,
            max_outstanding: 0,
        }
    }

    /// Takes one batch if the window allows, delivers it, and leaves it
    /// unacknowledged. Returns whether anything was sent.
    pub fn pump(&mut self, hub: &mut Hub) -> bool {
        let Some((seq, msgs)) = hub.take_batch(self.id) else {
            return false;
        };
        let frame = encode_frame(seq, &msgs).expect("encode");
        let batch = decode_batch(&frame).expect("decode");
        self.mirror.apply_batch(&batch).expect("apply");
        self.frames += 1;
        self.messages += batch.messages.len() as u64;
        self.unacked.push(seq);
        let outstanding = hub.client(self.id).unwrap().outstanding();
        self.max_outstanding = self.max_outstanding.max(outstanding);
        true
    }

    pub fn ack_oldest(&mut self, hub: &mut Hub) {
        if !self.unacked.is_empty() {
            let seq = self.unacked.remove(0);
            hub.handle_client_message(self.id, Wire::Ack { seq });
        }
    }

    /// Sends and acknowledges until the hub has nothing left for us.
    pub fn sync(&mut self, hub: &mut Hub) {
        loop {
            while !self.unacked.is_empty() {
                self.ack_oldest(hub);
            }
            if !self.pump(hub) {
                break;
            }
        }
        while !self.unacked.is_empty() {
            self.ack_oldest(hub);
        }
    }

    pub fn state(&self) -> String {
        self.mirror.canonical_state()
    }
}

const NAMES: [&str; 3] = ["a", "b", "c"];

fn random_path(rng: &mut ChaCha8Rng) -> ScenePath {
    let depth = rng.random_range(1..=3);
    let mut s = String::new();
    for _ in 0..depth {
        s.push('/');
        s.push_str(NAMES[rng.random_range(0..NAMES.len())]);
    }
    path(&s)
}

fn random_pose(rng: &mut ChaCha8Rng) -> Pose {
    let axis = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), 1.0];
    let position = [rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)];
    Pose::from_axis_angle(axis, rng.random_range(-3.0..3.0), position).unwrap()
}

fn gui_uids(hub: &Hub, scope: Scope) -> Vec<(Uid, GuiKind)> {
    hub.gui(scope).unwrap().iter().map(|e| (e.uid, e.kind)).collect()
}

fn random_color(rng: &mut ChaCha8Rng) -> [u8; 3] {
    [rng.random(), rng.random(), rng.random()]
}

/// Applies one random mixed op to `scope` on the hub. Ops that the hub
/// refuses (a prop on a missing path, say) are fine; they change nothing.
pub fn random_op(hub: &mut Hub, scope: Scope, rng: &mut ChaCha8Rng, acting_client: Option<u64>) {
    match rng.random_range(0..100) {
        0..=19 => {
            let p = random_path(rng);
            let node = if rng.random_bool(0.5) {
                label(&format!("t{}", rng.random_range(0..5)))
            } else {
                cube(random_color(rng))
            };
            let _ = hub.upsert_node(scope, &p, node.with_visible(rng.random_bool(0.8)));
        }
        20..=34 => {
            let p = random_path(rng);
            let _ = hub.set_node_prop(scope, &p, "color", random_color(rng).into());
            let _ = hub.set_node_prop(scope, &p, "text", format!("t{}", rng.random_range(0..5)).into());
        }
        35..=44 => {
            let p = random_path(rng);
            let _ = hub.set_pose(scope, &p, random_pose(rng));
        }
        45..=49 => {
            let p = random_path(rng);
            let _ = hub.set_visible(scope, &p, rng.random_bool(0.5));
        }
        50..=57 => {
            let p = random_path(rng);
            let _ = hub.remove_node(scope, &p);
        }
        58..=69 => {
            let containers: Vec<Uid> = gui_uids(hub, scope)
                .into_iter()
                .filter(|(_, k)| *k == GuiKind::Folder)
                .map(|(u, _)| u)
                .chain([ROOT_CONTAINER])
                .collect();
            let container = containers[rng.random_range(0..containers.len())];
            let (kind, props, value) = match rng.random_range(0..4) {
                0 => (GuiKind::Button, base_props("Go"), Some(Value::Int(0))),
                1 => {
                    let mut props = base_props("Value");
                    props.insert("min".into(), 0.0.into());
                    props.insert("max".into(), 100.0.into());
                    props.insert("step".into(), 1.0.into());
                    (GuiKind::Slider, props, Some(Value::Float(rng.random_range(0..=100) as f64)))
                }
                2 => (GuiKind::Text, base_props("Name"), Some("x".into())),
                _ => {
                    let mut props = base_props("Group");
                    props.insert("expanded".into(), true.into());
                    (GuiKind::Folder, props, None)
                }
            };
            let _ = hub.add_gui(scope, kind, props, value, container);
        }
        70..=84 => {
            let uids = gui_uids(hub, scope);
            if uids.is_empty() {
                return;
            }
            let (uid, kind) = uids[rng.random_range(0..uids.len())];
            let value: Value = match kind {
                GuiKind::Slider => (rng.random_range(0..=120) as f64).into(),
                GuiKind::Text => format!("v{}", rng.random_range(0..4)).into(),
                GuiKind::Button => Value::Int(rng.random_range(0..3)),
                _ => return,
            };
            match (acting_client, rng.random_bool(0.5)) {
                (Some(client), true) => {
                    hub.handle_client_message(client, Wire::GuiUpdate { uid, value });
                }
                _ => {
                    let _ = hub.set_gui_value(scope, uid, value);
                }
            }
        }
        85..=92 => {
            let uids = gui_uids(hub, scope);
            if uids.is_empty() {
                return;
            }
            let (uid, kind) = uids[rng.random_range(0..uids.len())];
            if kind == GuiKind::Slider && rng.random_bool(0.5) {
                let _ = hub.set_gui_prop(scope, uid, "max", (rng.random_range(10..=100) as f64).into());
            } else {
                let _ = hub.set_gui_prop(scope, uid, "label", format!("L{}", rng.random_range(0..4)).into());
            }
        }
        _ => {
            let uids = gui_uids(hub, scope);
            if uids.is_empty() {
                return;
            }
            let (uid, _) = uids[rng.random_range(0..uids.len())];
            let _ = hub.remove_gui(scope, uid);
        }
    }
}

/// Outcome of one late-joiner convergence run.
pub struct ConvergenceRun {
    pub early: String,
    pub late: String,
    pub server: String,
}

/// Runs `ops` random ops against a fresh hub with one always-connected
/// client that pumps and acks on a random schedule, then connects a late
/// joiner and syncs both.
pub fn convergence_run(seed: u64, ops: usize) -> ConvergenceRun {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hub = Hub::default();
    let mut early = SimClient::connect(&mut hub);
    for _ in 0..ops {
        random_op(&mut hub, Scope::Broadcast, &mut rng, Some(early.id));
        match rng.random_range(0..10) {
            0..=2 => {
                early.pump(&mut hub);
            }
            3..=4 => early.ack_oldest(&mut hub),
            _ => {}
        }
    }
    let mut late = SimClient::connect(&mut hub);
    early.sync(&mut hub);
    late.sync(&mut hub);
    let server = scenecast::headless::canonical_state(
        hub.scene(Scope::Broadcast).unwrap(),
        hub.gui(Scope::Broadcast).unwrap(),
        None,
    );
    ConvergenceRun {
        early: early.state(),
        late: late.state(),
        server,
    }
}

// ── ops through the public API ───────────────────────────────

/// Same op mix as [`random_op`], issued through the public server API so
/// it travels over real sockets. `actor`, when given, sends client-side
/// GUI updates.
pub fn random_api_op(server: &scenecast::api::Server, rng: &mut ChaCha8Rng, actor: Option<&scenecast::headless::HeadlessClient>) {
    let scene = server.scene();
    let gui = server.gui();
    let p = random_path(rng);
    let s = p.as_str();
    match rng.random_range(0..100) {
        0..=19 => {
            let node = if rng.random_bool(0.5) {
                label(&format!("t{}", rng.random_range(0..5)))
            } else {
                cube(random_color(rng))
            };
            let _ = scene.add_node(s, node.with_visible(rng.random_bool(0.8)));
        }
        20..=34 => {
            if let Ok(Some(h)) = scene.get(s) {
                let _ = h.set_prop("color", random_color(rng));
                let _ = h.set_prop("text", format!("t{}", rng.random_range(0..5)));
            }
        }
        35..=44 => {
            if let Ok(Some(h)) = scene.get(s) {
                let _ = h.set_pose(random_pose(rng));
            }
        }
        45..=49 => {
            if let Ok(Some(h)) = scene.get(s) {
                let _ = h.set_visible(rng.random_bool(0.5));
            }
        }
        50..=57 => {
            let _ = scene.remove(s);
        }
        58..=69 => {
            let folders: Vec<Uid> = server.inspect(|hub| {
                hub.gui(Scope::Broadcast)
                    .unwrap()
                    .iter()
                    .filter(|e| e.kind == GuiKind::Folder)
                    .map(|e| e.uid)
                    .collect()
            });
            let target = match folders.len() {
                0 => gui.clone(),
                n if rng.random_bool(0.5) => gui.get(folders[rng.random_range(0..n)]).unwrap().unwrap().contents().unwrap(),
                _ => gui.clone(),
            };
            let _ = match rng.random_range(0..4) {
                0 => target.add_button("Go"),
                1 => target.add_slider("Value", 0.0, 100.0, 1.0, rng.random_range(0..=100) as f64),
                2 => target.add_text("Name", "x"),
                _ => target.add_folder("Group"),
            };
        }
        70..=84 => {
            let uids = server.inspect(|hub| gui_uids(hub, Scope::Broadcast));
            if uids.is_empty() {
                return;
            }
            let (uid, kind) = uids[rng.random_range(0..uids.len())];
            let value: Value = match kind {
                GuiKind::Slider => (rng.random_range(0..=120) as f64).into(),
                GuiKind::Text => format!("v{}", rng.random_range(0..4)).into(),
                GuiKind::Button => Value::Int(rng.random_range(0..3)),
                _ => return,
            };
            match (actor, rng.random_bool(0.5)) {
                (Some(client), true) => {
                    let _ = client.send_gui_update(uid, value);
                }
                _ => {
                    if let Ok(Some(h)) = gui.get(uid) {
                        let _ = h.set_value(value);
                    }
                }
            }
        }
        85..=92 => {
            let uids = server.inspect(|hub| gui_uids(hub, Scope::Broadcast));
            if uids.is_empty() {
                return;
            }
            let (uid, kind) = uids[rng.random_range(0..uids.len())];
            if let Ok(Some(h)) = gui.get(uid) {
                if kind == GuiKind::Slider && rng.random_bool(0.5) {
                    let _ = h.set_prop("max", rng.random_range(10..=100) as f64);
                } else {
                    let _ = h.set_label(&format!("L{}", rng.random_range(0..4)));
                }
            }
        }
        _ => {
            let uids = server.inspect(|hub| gui_uids(hub, Scope::Broadcast));
            if uids.is_empty() {
                return;
            }
            let (uid, _) = uids[rng.random_range(0..uids.len())];
            if let Ok(Some(h)) = gui.get(uid) {
                let _ = h.remove();
            }
        }
    }
}

/// Canonical state of the server's shared scene and GUI.
pub fn server_state(server: &scenecast::api::Server) -> String {
    server.inspect(|hub| {
        scenecast::headless::canonical_state(hub.scene(Scope::Broadcast).unwrap(), hub.gui(Scope::Broadcast).unwrap(), None)
    })
}

/// Runs `ops` API ops over sockets with one early client (which also sends
/// GUI updates), connects a late client, waits for quiescence and returns
/// (early, late, server) canonical states.
pub fn socket_convergence_run(seed: u64, ops: usize) -> ConvergenceRun {
    use std::time::Duration;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let server = scenecast::api::Server::start("127.0.0.1", 0).unwrap();
    let early = scenecast::headless::HeadlessClient::connect(&server.ws_url()).unwrap();
    for i in 0..ops {
        random_api_op(&server, &mut rng, Some(&early));
        if i % 50 == 0 {
            std::thread::sleep(Duration::from_millis(1));
        }
    }
    let late = scenecast::headless::HeadlessClient::connect(&server.ws_url()).unwrap();
    // Client-originated updates may still be in flight; wait until the
    // server state stops moving and both mirrors have caught up with it.
    let deadline = std::time::Instant::now() + Duration::from_secs(20);
    let mut server_now = server_state(&server);
    loop {
        std::thread::sleep(Duration::from_millis(100));
        let next = server_state(&server);
        let settled = next == server_now && early.canonical_state() == next && late.canonical_state() == next;
        server_now = next;
        if settled || std::time::Instant::now() > deadline {
            break;
        }
    }
    ConvergenceRun {
        early: early.canonical_state(),
        late: late.canonical_state(),
        server: server_now,
    }
}
