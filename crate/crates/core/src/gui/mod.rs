//! GUI element registry.
//!
//! Elements live in containers (folders, tab groups, tabs, or the implicit
//! root panel with uid 0). The registry validates server writes strictly,
//! coerces client writes, and tracks which listeners to fire for each
//! element. It never runs callbacks itself.

mod kind;

use std::collections::BTreeMap;

use thiserror::Error;

pub use kind::GuiKind;

use crate::props;
use crate::schema::{Props, Value};

pub type Uid = u64;

/// The implicit root panel.
pub const ROOT_CONTAINER: Uid = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ListenerId(pub u64);

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GuiError {
    #[error("no gui element with uid {0}")]
    UnknownUid(Uid),
    #[error("uid {0} is already in use")]
    DuplicateUid(Uid),
    #[error("no container with uid {0}")]
    UnknownContainer(Uid),
    #[error("uid {uid} is a {kind}, which cannot hold {child}")]
    BadContainer { uid: Uid, kind: String, child: GuiKind },
    #[error("invalid {kind} properties: {reason}")]
    InvalidProps { kind: GuiKind, reason: String },
    #[error("{kind} has no property {prop:?}")]
    UnknownProp { kind: GuiKind, prop: String },
    #[error("invalid value for uid {uid}: {reason}")]
    InvalidValue { uid: Uid, reason: String },
    /// A client sent a value of the wrong shape; treat as a protocol error.
    #[error("ill-typed client value for uid {uid}: {reason}")]
    IllTyped { uid: Uid, reason: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GuiElement {
    pub uid: Uid,
    pub kind: GuiKind,
    pub container_uid: Uid,
    pub order: u64,
    pub props: Props,
    pub value: Option<Value>,
}

impl GuiElement {
    pub fn prop(&self, name: &str) -> Option<&Value> {
        self.props.get(name)
    }
}

/// A client-originated value change.
#[derive(Debug, Clone, PartialEq)]
pub struct GuiEvent {
    pub uid: Uid,
    pub client_id: u64,
    pub value: Value,
    /// Server receipt time, milliseconds since the Unix epoch.
    pub timestamp_ms: u64,
}

/// Outcome of applying a client update.
#[derive(Debug, Clone, PartialEq)]
pub struct ClientUpdate {
    pub uid: Uid,
    /// The value stored after validation or clamping.
    pub value: Value,
    /// Listeners to notify, in registration order.
    pub listeners: Vec<ListenerId>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GuiRegistry {
    elements: BTreeMap<Uid, GuiElement>,
    listeners: BTreeMap<Uid, Vec<ListenerId>>,
    next_uid: Uid,
    next_order: u64,
    next_listener: u64,
}

impl Default for GuiRegistry {
    fn default() -> Self {
        Self::new()
    }
}

impl GuiRegistry {
    pub fn new() -> Self {
        Self {
            elements: BTreeMap::new(),
            listeners: BTreeMap::new(),
            next_uid: 1,
            next_order: 0,
            next_listener: 1,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn get(&self, uid: Uid) -> Option<&GuiElement> {
        self.elements.get(&uid)
    }

    pub fn contains(&self, uid: Uid) -> bool {
        self.elements.contains_key(&uid)
    }

    /// Elements in uid order.
    pub fn iter(&self) -> impl Iterator<Item = &GuiElement> {
        self.elements.values()
    }

    /// The uid the next [`GuiRegistry::add_element`] call will assign.
    pub fn next_uid(&self) -> Uid {
        self.next_uid
    }

    pub fn next_order(&self) -> u64 {
        self.next_order
    }

    pub fn value(&self, uid: Uid) -> Result<Option<&Value>, GuiError> {
        self.get(uid)
            .map(|e| e.value.as_ref())
            .ok_or(GuiError::UnknownUid(uid))
    }

    /// Adds an element with the next uid and order index.
    pub fn add_element(
        &mut self,
        kind: GuiKind,
        props: Props,
        initial_value: Option<Value>,
        container_uid: Uid,
    ) -> Result<Uid, GuiError> {
        let uid = self.next_uid;
        let order = self.next_order;
        self.insert_element(GuiElement {
            uid,
            kind,
            container_uid,
            order,
            props,
            value: initial_value,
        })?;
        Ok(uid)
    }

    /// Inserts an element whose uid and order were assigned elsewhere
    /// (a shared allocator, or a mirrored add message).
    pub fn insert_element(&mut self, element: GuiElement) -> Result<(), GuiError> {
        if element.uid == ROOT_CONTAINER || self.elements.contains_key(&element.uid) {
            return Err(GuiError::DuplicateUid(element.uid));
        }
        self.check_container(element.container_uid, element.kind)?;
        element
            .kind
            .validate_props(&element.props)
            .map_err(|reason| GuiError::InvalidProps {
                kind: element.kind,
                reason,
            })?;
        element
            .kind
            .validate_value(&element.props, element.value.as_ref())
            .map_err(|reason| GuiError::InvalidValue {
                uid: element.uid,
                reason,
            })?;
        self.next_uid = self.next_uid.max(element.uid + 1);
        self.next_order = self.next_order.max(element.order + 1);
        self.elements.insert(element.uid, element);
        Ok(())
    }

    /// Inserts, or replaces an element with the same uid while keeping its
    /// contents and listeners.
    pub fn upsert_element(&mut self, element: GuiElement) -> Result<(), GuiError> {
        let Some(old) = self.elements.remove(&element.uid) else {
            return self.insert_element(element);
        };
        let has_children = self.elements.values().any(|e| e.container_uid == element.uid);
        let result = if has_children && !element.kind.is_container() {
            Err(GuiError::BadContainer {
                uid: element.uid,
                kind: element.kind.as_str().to_owned(),
                child: old.kind,
            })
        } else {
            self.insert_element(element)
        };
        if result.is_err() {
            self.elements.insert(old.uid, old);
        }
        result
    }

    fn check_container(&self, container_uid: Uid, child: GuiKind) -> Result<(), GuiError> {
        let parent_kind = if container_uid == ROOT_CONTAINER {
            None
        } else {
            let parent = self
                .elements
                .get(&container_uid)
                .ok_or(GuiError::UnknownContainer(container_uid))?;
            Some(parent.kind)
        };
        let ok = match (parent_kind, child) {
            (Some(GuiKind::TabGroup), GuiKind::Tab) => true,
            (Some(GuiKind::TabGroup), _) | (_, GuiKind::Tab) => false,
            (None, _) => true,
            (Some(k), _) => k.is_container(),
        };
        if ok {
            Ok(())
        } else {
            Err(GuiError::BadContainer {
                uid: container_uid,
                kind: parent_kind.map_or("root panel", GuiKind::as_str).to_owned(),
                child,
            })
        }
    }

    /// Updates one property. Returns the element's new value when the
    /// change forced it back into range.
    pub fn set_element_prop(&mut self, uid: Uid, prop: &str, value: Value) -> Result<Option<Value>, GuiError> {
        let el = self.elements.get_mut(&uid).ok_or(GuiError::UnknownUid(uid))?;
        let kind = el.kind;
        if props::find(&kind.prop_specs(), prop).is_none() {
            return Err(GuiError::UnknownProp {
                kind,
                prop: prop.to_owned(),
            });
        }
        let mut props = el.props.clone();
        props.insert(prop.to_owned(), value);
        kind.validate_props(&props)
            .map_err(|reason| GuiError::InvalidProps { kind, reason })?;
        el.props = props;
        let refit = el.value.clone().map(|v| kind.fit_value(&el.props, v));
        if refit != el.value {
            el.value = refit.clone();
            Ok(refit)
        } else {
            Ok(None)
        }
    }

    /// Property write that checks only the property's own type and range.
    /// Used by mirrors replaying deduplicated streams; never refits the value.
    pub fn set_element_prop_trusted(&mut self, uid: Uid, prop: &str, value: Value) -> Result<(), GuiError> {
        let el = self.elements.get_mut(&uid).ok_or(GuiError::UnknownUid(uid))?;
        let kind = el.kind;
        let specs = kind.prop_specs();
        let spec = props::find(&specs, prop).ok_or_else(|| GuiError::UnknownProp {
            kind,
            prop: prop.to_owned(),
        })?;
        spec.validate(&value)
            .map_err(|reason| GuiError::InvalidProps { kind, reason })?;
        el.props.insert(prop.to_owned(), value);
        Ok(())
    }

    /// Server-initiated value write. Strict: out-of-range values are errors.
    /// Returns whether the stored value changed. Never yields listeners.
    pub fn set_value_from_server(&mut self, uid: Uid, value: Value) -> Result<bool, GuiError> {
        let el = self.elements.get_mut(&uid).ok_or(GuiError::UnknownUid(uid))?;
        el.kind
            .validate_value(&el.props, Some(&value))
            .map_err(|reason| GuiError::InvalidValue { uid, reason })?;
        let changed = el.value.as_ref() != Some(&value);
        el.value = Some(value);
        Ok(changed)
    }

    /// Value write that checks only the value's shape. Mirror-side
    /// counterpart of [`GuiRegistry::set_element_prop_trusted`].
    pub fn set_value_trusted(&mut self, uid: Uid, value: Value) -> Result<(), GuiError> {
        let el = self.elements.get_mut(&uid).ok_or(GuiError::UnknownUid(uid))?;
        let ty = el.kind.value_type().ok_or_else(|| GuiError::InvalidValue {
            uid,
            reason: format!("{} elements carry no value", el.kind),
        })?;
        if !ty.accepts(&value) || !value.is_finite() {
            return Err(GuiError::InvalidValue {
                uid,
                reason: format!("expected {ty}, got {value}"),
            });
        }
        el.value = Some(value);
        Ok(())
    }

    /// Applies a client-originated change and reports which listeners to
    /// fire. Buttons count clicks; numeric values clamp; enum violations
    /// and shape mismatches are [`GuiError::IllTyped`].
    pub fn apply_client_update(&mut self, event: &GuiEvent) -> Result<ClientUpdate, GuiError> {
        let uid = event.uid;
        let el = self.elements.get_mut(&uid).ok_or(GuiError::UnknownUid(uid))?;
        let value = if el.kind == GuiKind::Button {
            let clicks = el.value.as_ref().and_then(Value::as_i64).unwrap_or(0);
            Value::Int(clicks.saturating_add(1))
        } else {
            el.kind
                .coerce_client_value(&el.props, &event.value)
                .map_err(|reason| GuiError::IllTyped { uid, reason })?
        };
        el.value = Some(value.clone());
        Ok(ClientUpdate {
            uid,
            value,
            listeners: self.listeners.get(&uid).cloned().unwrap_or_default(),
        })
    }

    /// Removes an element and, for containers, everything inside it.
    /// Returns the removed uids, the requested one first.
    pub fn remove_element(&mut self, uid: Uid) -> Result<Vec<Uid>, GuiError> {
        if !self.elements.contains_key(&uid) {
            return Err(GuiError::UnknownUid(uid));
        }
        let removed = self.subtree(uid);
        for u in &removed {
            self.elements.remove(u);
            self.listeners.remove(u);
        }
        Ok(removed)
    }

    /// `uid` followed by its transitive contents in uid order.
    pub fn subtree(&self, uid: Uid) -> Vec<Uid> {
        let mut out = vec![uid];
        let mut i = 0;
        while i < out.len() {
            let parent = out[i];
            out.extend(
                self.elements
                    .values()
                    .filter(|e| e.container_uid == parent && e.uid != parent)
                    .map(|e| e.uid),
            );
            i += 1;
        }
        out[1..].sort_unstable();
        out
    }

    pub fn subscribe(&mut self, uid: Uid) -> Result<ListenerId, GuiError> {
        if !self.elements.contains_key(&uid) {
            return Err(GuiError::UnknownUid(uid));
        }
        let id = ListenerId(self.next_listener);
        self.next_listener += 1;
        self.listeners.entry(uid).or_default().push(id);
        Ok(id)
    }

    /// Returns false if the listener was not registered.
    pub fn unsubscribe(&mut self, id: ListenerId) -> bool {
        for list in self.listeners.values_mut() {
            if let Some(pos) = list.iter().position(|l| *l == id) {
                list.remove(pos);
                return true;
            }
        }
        false
    }
}

/// Builds the shared `label`/`disabled`/`visible` props.
pub fn base_props(label: &str) -> Props {
    Props::from([
        ("label".into(), Value::from(label)),
        ("disabled".into(), Value::Bool(false)),
        ("visible".into(), Value::Bool(true)),
    ])
}
