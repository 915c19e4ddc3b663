use std::collections::HashSet;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::gui::{GuiError, GuiRegistry};
use crate::protocol::{CameraState, ProtocolError, Wire};
use crate::scene::{NodeKind, Pose, SceneError, SceneGraph, SceneNode, ScenePath};
use crate::schema::{Batch, CodecError, Value};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MirrorError {
    #[error("batch seq {seq} does not follow {last_seq}")]
    OutOfOrder { seq: u64, last_seq: u64 },
    #[error("handshake rejected: {reason} (server schema {server_hash}, client schema {client_hash})")]
    Rejected {
        reason: String,
        server_hash: String,
        client_hash: String,
    },
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error(transparent)]
    Gui(#[from] GuiError),
    #[error("server sent client-only message {0}")]
    Unexpected(String),
}

/// Client-side copy of everything the server has told one client.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ClientMirror {
    pub scene: SceneGraph,
    pub gui: GuiRegistry,
    pub camera: Option<CameraState>,
    pub client_id: Option<u64>,
    pub last_seq: u64,
}

impl ClientMirror {
    pub fn new() -> Self {
        Self::default()
    }

    /// Applies a decoded batch. Sequence numbers must strictly increase.
    pub fn apply_batch(&mut self, batch: &Batch) -> Result<(), MirrorError> {
        if batch.seq <= self.last_seq {
            return Err(MirrorError::OutOfOrder {
                seq: batch.seq,
                last_seq: self.last_seq,
            });
        }
        for msg in &batch.messages {
            self.apply(&Wire::from_message(msg)?)?;
        }
        self.last_seq = batch.seq;
        Ok(())
    }

    pub fn apply_all<'a>(&mut self, wires: impl IntoIterator<Item = &'a Wire>) -> Result<(), MirrorError> {
        wires.into_iter().try_for_each(|w| self.apply(w))
    }

    pub fn apply(&mut self, wire: &Wire) -> Result<(), MirrorError> {
        match wire {
            Wire::Welcome { client_id, .. } => self.client_id = Some(*client_id),
            Wire::Reject {
                reason,
                server_hash,
                client_hash,
            } => {
                return Err(MirrorError::Rejected {
                    reason: reason.clone(),
                    server_hash: server_hash.clone(),
                    client_hash: client_hash.clone(),
                })
            }
            Wire::SceneAdd { path, node } => self.scene.upsert_node(path, node.clone())?,
            Wire::SceneSetProp { path, prop, value } => {
                self.scene.set_node_prop_trusted(path, prop, value.clone())?
            }
            Wire::SceneSetPose { path, pose } => {
                self.ensure_node(path)?;
                self.scene.set_pose(path, *pose)?;
            }
            Wire::SceneSetVisible { path, visible } => {
                self.ensure_node(path)?;
                self.scene.set_visible(path, *visible)?;
            }
            Wire::SceneSetClickable { path, clickable } => {
                self.ensure_node(path)?;
                self.scene.set_clickable(path, *clickable)?;
            }
            Wire::SceneRemove { path } => {
                if self.scene.contains(path) {
                    self.scene.remove_node(path)?;
                }
            }
            Wire::GuiAdd(el) => self.gui.upsert_element(el.clone())?,
            Wire::GuiSetProp { uid, prop, value } => {
                self.gui.set_element_prop_trusted(*uid, prop, value.clone())?
            }
            Wire::GuiSetValue { uid, value } => self.gui.set_value_trusted(*uid, value.clone())?,
            Wire::GuiRemove { uid, .. } => {
                if self.gui.contains(*uid) {
                    self.gui.remove_element(*uid)?;
                }
            }
            Wire::CameraSet(cam) => self.camera = Some(*cam),
            Wire::Hello { .. }
            | Wire::Ack { .. }
            | Wire::SceneClick { .. }
            | Wire::GuiUpdate { .. }
            | Wire::CameraReport(_) => {
                return Err(MirrorError::Unexpected(format!("{wire:?}")));
            }
        }
        Ok(())
    }

    /// Pose and flag writes may target an implicit ancestor whose creating
    /// child has since been removed; recreate it as a placeholder.
    fn ensure_node(&mut self, path: &ScenePath) -> Result<(), SceneError> {
        if !self.scene.contains(path) && !path.is_root() {
            self.scene.upsert_node(path, SceneNode::placeholder())?;
        }
        Ok(())
    }

    pub fn canonical_state(&self) -> String {
        canonical_state(&self.scene, &self.gui, self.camera.as_ref())
    }
}

/// Deterministic text rendering of a scene, GUI and camera.
///
/// Nodes appear by path and elements by uid. Floats use nine significant
/// digits. Placeholders that carry no state and contain nothing but such
/// placeholders are omitted, since they have no observable effect.
pub fn canonical_state(scene: &SceneGraph, gui: &GuiRegistry, camera: Option<&CameraState>) -> String {
    let mut kept: HashSet<ScenePath> = HashSet::new();
    let nodes: Vec<(&ScenePath, &SceneNode)> = scene.iter().collect();
    for (path, node) in nodes.iter().rev() {
        if kept.contains(*path) || !is_bare_placeholder(node) {
            kept.insert((*path).clone());
            if let Some(parent) = path.parent() {
                kept.insert(parent);
            }
        }
    }

    let mut out = String::from("scene\n");
    for (path, node) in scene.iter().filter(|(p, _)| kept.contains(p)) {
        let _ = write!(
            out,
            "  {path} {} pose={} visible={} clickable={}",
            node.kind,
            fmt_pose(&node.pose),
            node.visible,
            node.clickable
        );
        for (k, v) in &node.props {
            let _ = write!(out, " {k}={}", fmt_value(v));
        }
        out.push('\n');
    }
    out.push_str("gui\n");
    for el in gui.iter() {
        let _ = write!(
            out,
            "  #{} {} in={} order={}",
            el.uid, el.kind, el.container_uid, el.order
        );
        for (k, v) in &el.props {
            let _ = write!(out, " {k}={}", fmt_value(v));
        }
        if let Some(v) = &el.value {
            let _ = write!(out, " value={}", fmt_value(v));
        }
        out.push('\n');
    }
    if let Some(cam) = camera {
        let _ = writeln!(
            out,
            "camera pose={} fov={} aspect={} look_at={}",
            fmt_pose(&cam.pose),
            fmt_f64(cam.fov),
            fmt_f64(cam.aspect),
            fmt_floats(&cam.look_at)
        );
    }
    out
}

fn is_bare_placeholder(node: &SceneNode) -> bool {
    node.kind == NodeKind::Placeholder && node.pose == Pose::IDENTITY && node.visible && !node.clickable
}

fn fmt_f64(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.8e}")
}

fn fmt_floats(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| fmt_f64(*x)).collect();
    format!("({})", parts.join(", "))
}

fn fmt_pose(pose: &Pose) -> String {
    format!("{}@{}", fmt_floats(&pose.wxyz()), fmt_floats(&pose.position()))
}

fn digest(bytes: &[u8]) -> String {
    hex::encode(&Sha256::digest(bytes)[..8])
}

fn fmt_value(v: &Value) -> String {
    match v {
        Value::Nil => "nil".into(),
        Value::Bool(b) => b.to_string(),
        Value::Int(i) => i.to_string(),
        Value::Float(x) => fmt_f64(*x),
        Value::String(s) => format!("{s:?}"),
        Value::Bytes(b) => format!("bytes[{}]:{}", b.len(), digest(b)),
        Value::Float32Array(a) => {
            let bytes: Vec<u8> = a
                .iter()
                .flat_map(|x| {
                    let x = if *x == 0.0 { 0.0f32 } else { *x };
                    x.to_le_bytes()
                })
                .collect();
            format!("f32[{}]:{}", a.len(), digest(&bytes))
        }
        Value::Tuple(items) => {
            let parts: Vec<String> = items.iter().map(fmt_value).collect();
            format!("({})", parts.join(", "))
        }
        Value::List(items) => {
            let parts: Vec<String> = items.iter().map(fmt_value).collect();
            format!("[{}]", parts.join(", "))
        }
    }
}
