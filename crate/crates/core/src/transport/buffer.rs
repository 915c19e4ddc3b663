//! Keyed, insertion-ordered message buffers.

use std::collections::HashSet;
use std::sync::Arc;

use indexmap::IndexMap;

use crate::gui::Uid;
use crate::protocol::Wire;
use crate::scene::path_is_within;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KeyClass {
    NodeUpsert,
    NodeProp,
    NodeRemovePurge,
    GuiAdd,
    GuiProp,
    GuiValue,
    GuiRemovePurge,
    CameraSet,
    Other,
}

/// Identity under which later messages supersede earlier ones.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RedundancyKey {
    pub class: KeyClass,
    /// Scene path or uid, as a string.
    pub target: String,
    pub sub: Option<String>,
}

impl RedundancyKey {
    fn new(class: KeyClass, target: impl Into<String>, sub: Option<&str>) -> Self {
        Self {
            class,
            target: target.into(),
            sub: sub.map(str::to_owned),
        }
    }

    fn is_scene(&self) -> bool {
        matches!(self.class, KeyClass::NodeUpsert | KeyClass::NodeProp)
    }

    fn is_gui(&self) -> bool {
        matches!(self.class, KeyClass::GuiAdd | KeyClass::GuiProp | KeyClass::GuiValue)
    }
}

/// Classifies a message. `None` means the message is never deduplicated.
pub fn redundancy_key(wire: &Wire) -> Option<RedundancyKey> {
    use KeyClass::*;
    Some(match wire {
        Wire::SceneAdd { path, .. } => RedundancyKey::new(NodeUpsert, path.as_str(), None),
        Wire::SceneSetProp { path, prop, .. } => RedundancyKey::new(NodeProp, path.as_str(), Some(prop)),
        Wire::SceneSetPose { path, .. } => RedundancyKey::new(NodeProp, path.as_str(), Some("@pose")),
        Wire::SceneSetVisible { path, .. } => RedundancyKey::new(NodeProp, path.as_str(), Some("@visible")),
        Wire::SceneSetClickable { path, .. } => {
            RedundancyKey::new(NodeProp, path.as_str(), Some("@clickable"))
        }
        Wire::SceneRemove { path } => RedundancyKey::new(NodeRemovePurge, path.as_str(), None),
        Wire::GuiAdd(el) => RedundancyKey::new(GuiAdd, el.uid.to_string(), None),
        Wire::GuiSetProp { uid, prop, .. } => RedundancyKey::new(GuiProp, uid.to_string(), Some(prop)),
        Wire::GuiSetValue { uid, .. } => RedundancyKey::new(GuiValue, uid.to_string(), None),
        Wire::GuiRemove { uid, .. } => RedundancyKey::new(GuiRemovePurge, uid.to_string(), None),
        Wire::CameraSet(_) => RedundancyKey::new(CameraSet, "camera", None),
        _ => return None,
    })
}

/// What happens to purge messages once their purge has been applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BufferMode {
    /// State for late joiners: removals are applied, never stored.
    Persistent,
    /// Traffic for a live client: removals are applied, then queued so the
    /// client learns about them.
    Outbound,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum EntryKey {
    Keyed(RedundancyKey),
    Unique(u64),
}

#[derive(Debug, Clone)]
pub struct PersistentBuffer {
    mode: BufferMode,
    entries: IndexMap<EntryKey, Arc<Wire>>,
    next_unique: u64,
}

impl PersistentBuffer {
    pub fn new(mode: BufferMode) -> Self {
        Self {
            mode,
            entries: IndexMap::new(),
            next_unique: 0,
        }
    }

    pub fn persistent() -> Self {
        Self::new(BufferMode::Persistent)
    }

    pub fn outbound() -> Self {
        Self::new(BufferMode::Outbound)
    }

    pub fn mode(&self) -> BufferMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Messages in buffer order.
    pub fn iter(&self) -> impl Iterator<Item = &Arc<Wire>> {
        self.entries.values()
    }

    pub fn messages(&self) -> Vec<Arc<Wire>> {
        self.entries.values().cloned().collect()
    }

    /// Empties the buffer, returning its messages in order.
    pub fn drain(&mut self) -> Vec<Arc<Wire>> {
        self.entries.drain(..).map(|(_, m)| m).collect()
    }

    pub fn apply(&mut self, wire: Arc<Wire>) {
        let Some(key) = redundancy_key(&wire) else {
            self.push_unique(wire);
            return;
        };
        match key.class {
            KeyClass::NodeRemovePurge | KeyClass::GuiRemovePurge => {
                self.purge_for(&wire);
                if self.mode == BufferMode::Outbound {
                    self.push_unique(wire);
                }
            }
            KeyClass::NodeUpsert => {
                let target = key.target.clone();
                self.entries.retain(|k, _| {
                    !matches!(k, EntryKey::Keyed(k) if k.class == KeyClass::NodeProp && k.target == target)
                });
                self.entries.insert(EntryKey::Keyed(key), wire);
            }
            _ => {
                self.entries.insert(EntryKey::Keyed(key), wire);
            }
        }
    }

    /// Applies only the deletion side of a removal; non-removals are ignored.
    pub fn apply_purges_only(&mut self, wire: &Wire) {
        self.purge_for(wire);
    }

    fn push_unique(&mut self, wire: Arc<Wire>) {
        self.entries.insert(EntryKey::Unique(self.next_unique), wire);
        self.next_unique += 1;
    }

    fn purge_for(&mut self, wire: &Wire) {
        match wire {
            Wire::SceneRemove { path } => {
                let root = path.as_str();
                self.entries.retain(|k, _| match k {
                    EntryKey::Keyed(k) if k.is_scene() => !path_is_within(&k.target, root),
                    _ => true,
                });
            }
            Wire::GuiRemove { uid, uids } => {
                let mut dead: HashSet<String> = uids.iter().map(Uid::to_string).collect();
                dead.insert(uid.to_string());
                self.entries.retain(|k, _| match k {
                    EntryKey::Keyed(k) if k.is_gui() => !dead.contains(&k.target),
                    _ => true,
                });
            }
            _ => {}
        }
    }
}

/// Replay order for a client joining now.
pub fn snapshot_for_new_client(global: &PersistentBuffer, overlay: &PersistentBuffer) -> Vec<Arc<Wire>> {
    global.iter().chain(overlay.iter()).cloned().collect()
}
