//! The synchronization core: authoritative state plus every connection's
//! buffers. It performs no I/O; the socket layer and tests drive it.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use crate::gui::{GuiElement, GuiError, GuiEvent, GuiKind, GuiRegistry, ListenerId, Uid};
use crate::protocol::{CameraState, Wire};
use crate::scene::{Pose, SceneGraph, SceneNode, ScenePath};
use crate::schema::{Props, Value};

use super::buffer::{snapshot_for_new_client, PersistentBuffer};
use super::connection::ClientConnection;
use super::TransportError;

/// Where a write goes: every client, or one client's overlay.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scope {
    Broadcast,
    Client(u64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClickEvent {
    pub path: ScenePath,
    pub client_id: u64,
    pub ray_origin: [f64; 3],
    /// Unit length.
    pub ray_direction: [f64; 3],
    pub screen_pos: [f64; 2],
}

/// Something the dispatcher has to react to.
#[derive(Debug, Clone, PartialEq)]
pub enum HubEvent {
    Connected(u64),
    Disconnected(u64),
    Gui {
        scope: Scope,
        event: GuiEvent,
        listeners: Vec<ListenerId>,
    },
    Click {
        scope: Scope,
        event: ClickEvent,
    },
}

#[derive(Debug)]
pub struct Hub {
    schema_hash: String,
    scene: SceneGraph,
    gui: GuiRegistry,
    global: PersistentBuffer,
    clients: BTreeMap<u64, ClientConnection>,
    next_client_id: u64,
    next_uid: Uid,
    next_order: u64,
}

impl Hub {
    pub fn new(schema_hash: &str) -> Self {
        Self {
            schema_hash: schema_hash.to_owned(),
            scene: SceneGraph::new(),
            gui: GuiRegistry::new(),
            global: PersistentBuffer::persistent(),
            clients: BTreeMap::new(),
            next_client_id: 1,
            next_uid: 1,
            next_order: 0,
        }
    }

    pub fn schema_hash(&self) -> &str {
        &self.schema_hash
    }

    pub fn global_buffer(&self) -> &PersistentBuffer {
        &self.global
    }

    // ── connections ──────────────────────────────────────────────

    /// Accepts or refuses a connection's first message. On success the
    /// client's pending buffer starts with `Welcome` and the snapshot.
    pub fn handshake(&mut self, hello: &Wire) -> Result<u64, Wire> {
        let client_hash = match hello {
            Wire::Hello { schema_hash } => schema_hash.clone(),
            other => {
                return Err(self.reject(format!("expected Hello, got {other:?}"), String::new()));
            }
        };
        if client_hash != self.schema_hash {
            return Err(self.reject(
                format!(
                    "schema mismatch: server {} client {}",
                    self.schema_hash, client_hash
                ),
                client_hash,
            ));
        }
        let id = self.next_client_id;
        self.next_client_id += 1;
        let mut conn = ClientConnection::new(id);
        conn.enqueue(Arc::new(Wire::Welcome {
            client_id: id,
            schema_hash: self.schema_hash.clone(),
        }));
        for msg in snapshot_for_new_client(&self.global, conn.overlay()) {
            conn.enqueue(msg);
        }
        self.clients.insert(id, conn);
        tracing::info!(client = id, "client connected");
        Ok(id)
    }

    fn reject(&self, reason: String, client_hash: String) -> Wire {
        Wire::Reject {
            reason,
            server_hash: self.schema_hash.clone(),
            client_hash,
        }
    }

    pub fn disconnect(&mut self, client_id: u64) -> bool {
        let known = self.clients.remove(&client_id).is_some();
        if known {
            tracing::info!(client = client_id, "client disconnected");
        }
        known
    }

    pub fn client_ids(&self) -> Vec<u64> {
        self.clients.keys().copied().collect()
    }

    pub fn client(&self, client_id: u64) -> Option<&ClientConnection> {
        self.clients.get(&client_id)
    }

    pub fn client_mut(&mut self, client_id: u64) -> Option<&mut ClientConnection> {
        self.clients.get_mut(&client_id)
    }

    fn conn(&mut self, client_id: u64) -> Result<&mut ClientConnection, TransportError> {
        self.clients
            .get_mut(&client_id)
            .ok_or(TransportError::UnknownClient(client_id))
    }

    /// Next outgoing batch for a client, if its window allows one.
    pub fn take_batch(&mut self, client_id: u64) -> Option<(u64, Vec<Arc<Wire>>)> {
        self.clients.get_mut(&client_id)?.take_batch()
    }

    // ── state access ─────────────────────────────────────────────

    pub fn scene(&self, scope: Scope) -> Result<&SceneGraph, TransportError> {
        match scope {
            Scope::Broadcast => Ok(&self.scene),
            Scope::Client(id) => self
                .clients
                .get(&id)
                .map(|c| &c.scene)
                .ok_or(TransportError::UnknownClient(id)),
        }
    }

    pub fn gui(&self, scope: Scope) -> Result<&GuiRegistry, TransportError> {
        match scope {
            Scope::Broadcast => Ok(&self.gui),
            Scope::Client(id) => self
                .clients
                .get(&id)
                .map(|c| &c.gui)
                .ok_or(TransportError::UnknownClient(id)),
        }
    }

    fn scene_mut(&mut self, scope: Scope) -> Result<&mut SceneGraph, TransportError> {
        match scope {
            Scope::Broadcast => Ok(&mut self.scene),
            Scope::Client(id) => Ok(&mut self.conn(id)?.scene),
        }
    }

    fn gui_mut(&mut self, scope: Scope) -> Result<&mut GuiRegistry, TransportError> {
        match scope {
            Scope::Broadcast => Ok(&mut self.gui),
            Scope::Client(id) => Ok(&mut self.conn(id)?.gui),
        }
    }

    // ── emission ─────────────────────────────────────────────────

    fn emit(&mut self, scope: Scope, wire: Wire) -> Result<(), TransportError> {
        let wire = Arc::new(wire);
        match scope {
            Scope::Broadcast => {
                self.global.apply(wire.clone());
                for conn in self.clients.values_mut() {
                    conn.purge_overlay(&wire);
                    if let Wire::SceneRemove { path } = &*wire {
                        if conn.scene.contains(path) {
                            let _ = conn.scene.remove_node(path);
                        }
                    }
                    conn.enqueue(wire.clone());
                }
            }
            Scope::Client(id) => self.conn(id)?.persist(wire),
        }
        Ok(())
    }

    // ── scene writes ─────────────────────────────────────────────

    pub fn upsert_node(&mut self, scope: Scope, path: &ScenePath, node: SceneNode) -> Result<(), TransportError> {
        self.scene_mut(scope)?.upsert_node(path, node.clone())?;
        self.emit(
            scope,
            Wire::SceneAdd {
                path: path.clone(),
                node,
            },
        )
    }

    pub fn set_node_prop(&mut self, scope: Scope, path: &ScenePath, name: &str, value: Value) -> Result<(), TransportError> {
        self.scene_mut(scope)?.set_node_prop(path, name, value.clone())?;
        self.emit(
            scope,
            Wire::SceneSetProp {
                path: path.clone(),
                prop: name.to_owned(),
                value,
            },
        )
    }

    pub fn set_pose(&mut self, scope: Scope, path: &ScenePath, pose: Pose) -> Result<(), TransportError> {
        self.scene_mut(scope)?.set_pose(path, pose)?;
        self.emit(
            scope,
            Wire::SceneSetPose {
                path: path.clone(),
                pose,
            },
        )
    }

    pub fn set_visible(&mut self, scope: Scope, path: &ScenePath, visible: bool) -> Result<(), TransportError> {
        self.scene_mut(scope)?.set_visible(path, visible)?;
        self.emit(
            scope,
            Wire::SceneSetVisible {
                path: path.clone(),
                visible,
            },
        )
    }

    pub fn set_clickable(&mut self, scope: Scope, path: &ScenePath, clickable: bool) -> Result<(), TransportError> {
        self.scene_mut(scope)?.set_clickable(path, clickable)?;
        self.emit(
            scope,
            Wire::SceneSetClickable {
                path: path.clone(),
                clickable,
            },
        )
    }

    pub fn remove_node(&mut self, scope: Scope, path: &ScenePath) -> Result<Vec<ScenePath>, TransportError> {
        let removed = self.scene_mut(scope)?.remove_node(path)?;
        self.emit(scope, Wire::SceneRemove { path: path.clone() })?;
        Ok(removed)
    }

    // ── gui writes ───────────────────────────────────────────────

    /// Adds an element. Uids come from one allocator shared by the global
    /// and per-client registries, so they never collide in a mirror.
    pub fn add_gui(
        &mut self,
        scope: Scope,
        kind: GuiKind,
        props: Props,
        value: Option<Value>,
        container_uid: Uid,
    ) -> Result<Uid, TransportError> {
        let element = GuiElement {
            uid: self.next_uid,
            kind,
            container_uid,
            order: self.next_order,
            props,
            value,
        };
        self.gui_mut(scope)?.insert_element(element.clone())?;
        self.next_uid += 1;
        self.next_order += 1;
        let uid = element.uid;
        self.emit(scope, Wire::GuiAdd(element))?;
        Ok(uid)
    }

    pub fn set_gui_prop(&mut self, scope: Scope, uid: Uid, prop: &str, value: Value) -> Result<(), TransportError> {
        let refit = self.gui_mut(scope)?.set_element_prop(uid, prop, value.clone())?;
        self.emit(
            scope,
            Wire::GuiSetProp {
                uid,
                prop: prop.to_owned(),
                value,
            },
        )?;
        if let Some(v) = refit {
            self.emit(scope, Wire::GuiSetValue { uid, value: v })?;
        }
        Ok(())
    }

    /// Server-side value write. Never produces listener events.
    pub fn set_gui_value(&mut self, scope: Scope, uid: Uid, value: Value) -> Result<(), TransportError> {
        if self.gui_mut(scope)?.set_value_from_server(uid, value.clone())? {
            self.emit(scope, Wire::GuiSetValue { uid, value })?;
        }
        Ok(())
    }

    pub fn remove_gui(&mut self, scope: Scope, uid: Uid) -> Result<Vec<Uid>, TransportError> {
        let uids = self.gui_mut(scope)?.remove_element(uid)?;
        self.emit(
            scope,
            Wire::GuiRemove {
                uid,
                uids: uids.clone(),
            },
        )?;
        Ok(uids)
    }

    pub fn subscribe(&mut self, scope: Scope, uid: Uid) -> Result<ListenerId, TransportError> {
        Ok(self.gui_mut(scope)?.subscribe(uid)?)
    }

    pub fn unsubscribe(&mut self, scope: Scope, id: ListenerId) -> bool {
        self.gui_mut(scope).is_ok_and(|g| g.unsubscribe(id))
    }

    /// Scope holding `uid` from the point of view of `client_id`.
    pub fn gui_scope_of(&self, client_id: u64, uid: Uid) -> Option<Scope> {
        if self.gui.contains(uid) {
            Some(Scope::Broadcast)
        } else if self.clients.get(&client_id).is_some_and(|c| c.gui.contains(uid)) {
            Some(Scope::Client(client_id))
        } else {
            None
        }
    }

    fn scene_scope_of(&self, client_id: u64, path: &ScenePath) -> Option<Scope> {
        if self.scene.get(path).is_some_and(|n| n.clickable) {
            Some(Scope::Broadcast)
        } else if self
            .clients
            .get(&client_id)
            .and_then(|c| c.scene.get(path))
            .is_some_and(|n| n.clickable)
        {
            Some(Scope::Client(client_id))
        } else {
            None
        }
    }

    // ── camera ───────────────────────────────────────────────────

    pub fn camera(&self, client_id: u64) -> Result<Option<CameraState>, TransportError> {
        self.clients
            .get(&client_id)
            .map(|c| c.camera)
            .ok_or(TransportError::UnknownClient(client_id))
    }

    pub fn set_camera(&mut self, client_id: u64, camera: CameraState) -> Result<(), TransportError> {
        camera.validate().map_err(TransportError::InvalidCamera)?;
        let conn = self.conn(client_id)?;
        conn.camera = Some(camera);
        conn.enqueue(Arc::new(Wire::CameraSet(camera)));
        Ok(())
    }

    // ── inbound ──────────────────────────────────────────────────

    /// Applies one message from an accepted client. Bad messages are
    /// logged and dropped; they never disturb other clients.
    pub fn handle_client_message(&mut self, client_id: u64, wire: Wire) -> Option<HubEvent> {
        if !self.clients.contains_key(&client_id) {
            return None;
        }
        match wire {
            Wire::Ack { seq } => {
                self.conn(client_id).ok()?.on_ack(seq);
                None
            }
            Wire::CameraReport(camera) => {
                self.conn(client_id).ok()?.camera = Some(camera);
                None
            }
            Wire::GuiUpdate { uid, value } => self.client_gui_update(client_id, uid, value),
            Wire::SceneClick {
                path,
                ray_origin,
                ray_direction,
                screen_pos,
            } => {
                let Some(scope) = self.scene_scope_of(client_id, &path) else {
                    tracing::warn!(client = client_id, %path, "click on unknown or unclickable node dropped");
                    return None;
                };
                let norm = ray_direction.iter().map(|x| x * x).sum::<f64>().sqrt();
                if !(norm > 0.0 && norm.is_finite()) {
                    tracing::warn!(client = client_id, %path, "click with degenerate ray dropped");
                    return None;
                }
                Some(HubEvent::Click {
                    scope,
                    event: ClickEvent {
                        path,
                        client_id,
                        ray_origin,
                        ray_direction: ray_direction.map(|x| x / norm),
                        screen_pos,
                    },
                })
            }
            other => {
                tracing::warn!(client = client_id, message = ?other, "unexpected client message dropped");
                None
            }
        }
    }

    fn client_gui_update(&mut self, client_id: u64, uid: Uid, value: Value) -> Option<HubEvent> {
        let Some(scope) = self.gui_scope_of(client_id, uid) else {
            tracing::warn!(client = client_id, uid, "update for unknown element dropped");
            return None;
        };
        let event = GuiEvent {
            uid,
            client_id,
            value,
            timestamp_ms: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_millis() as u64),
        };
        let update = match self.gui_mut(scope).ok()?.apply_client_update(&event) {
            Ok(u) => u,
            Err(e @ (GuiError::IllTyped { .. } | GuiError::UnknownUid(_))) => {
                tracing::warn!(client = client_id, error = %e, "gui update rejected");
                return None;
            }
            Err(e) => {
                tracing::warn!(client = client_id, error = %e, "gui update failed");
                return None;
            }
        };
        let _ = self.emit(
            scope,
            Wire::GuiSetValue {
                uid,
                value: update.value.clone(),
            },
        );
        Some(HubEvent::Gui {
            scope,
            event: GuiEvent {
                value: update.value,
                ..event
            },
            listeners: update.listeners,
        })
    }
}

impl Default for Hub {
    fn default() -> Self {
        Self::new(crate::schema::builtin_schema_hash())
    }
}
