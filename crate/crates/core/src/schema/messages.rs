//! The closed set of wire messages.

use crate::gui::GuiKind;
use crate::scene::NodeKind;

use super::types::{DedupPolicy, FieldType, MessageType};

pub const HELLO: &str = "Hello";
pub const WELCOME: &str = "Welcome";
pub const REJECT: &str = "Reject";
pub const ACK: &str = "Ack";
pub const SCENE_SET_PROP: &str = "SceneNodeSetProp";
pub const SCENE_SET_POSE: &str = "SceneNodeSetPose";
pub const SCENE_SET_VISIBLE: &str = "SceneNodeSetVisible";
pub const SCENE_SET_CLICKABLE: &str = "SceneNodeSetClickable";
pub const SCENE_REMOVE: &str = "SceneNodeRemove";
pub const SCENE_CLICK: &str = "SceneClick";
pub const GUI_SET_PROP: &str = "GuiSetProp";
pub const GUI_SET_VALUE: &str = "GuiSetValue";
pub const GUI_REMOVE: &str = "GuiRemove";
pub const GUI_UPDATE: &str = "GuiUpdate";
pub const CAMERA_SET: &str = "CameraSet";
pub const CAMERA_REPORT: &str = "CameraReport";

pub fn scene_add_type(kind: NodeKind) -> String {
    format!("SceneAdd{}", kind.type_stem())
}

pub fn gui_add_type(kind: GuiKind) -> String {
    format!("GuiAdd{}", kind.type_stem())
}

/// Optional slots used to carry a dynamically typed property or value.
/// Exactly one slot is set in a well-formed message.
pub fn value_slots() -> Vec<(String, FieldType)> {
    [
        ("bool", FieldType::Bool),
        ("int", FieldType::Int),
        ("float", FieldType::Float),
        ("string", FieldType::String),
        ("bytes", FieldType::Bytes),
        ("float32_array", FieldType::Float32Array),
        ("vec3", FieldType::vec3()),
        ("rgb", FieldType::rgb()),
        ("strings", FieldType::list(FieldType::String)),
    ]
    .into_iter()
    .map(|(n, t)| (n.to_owned(), FieldType::optional(t)))
    .collect()
}

fn camera_fields(ty: MessageType) -> MessageType {
    ty.field("wxyz", FieldType::quat())
        .field("position", FieldType::vec3())
        .field("fov", FieldType::Float)
        .field("aspect", FieldType::Float)
        .field("look_at", FieldType::vec3())
}

/// Every message type, in registration order.
pub fn all_message_types() -> Vec<MessageType> {
    use DedupPolicy::{ByKey, None, PurgePrefix};
    let mut types = vec![
        MessageType::new(HELLO, None, "First client frame; carries the client's schema hash.")
            .field("schema_hash", FieldType::String),
        MessageType::new(WELCOME, None, "Handshake accepted; first message of the first batch.")
            .field("client_id", FieldType::Int)
            .field("schema_hash", FieldType::String),
        MessageType::new(REJECT, None, "Handshake refused; the connection closes after this frame.")
            .field("reason", FieldType::String)
            .field("server_hash", FieldType::String)
            .field("client_hash", FieldType::String),
        MessageType::new(ACK, None, "Client acknowledgement of a received batch.")
            .field("seq", FieldType::Int),
    ];

    for kind in NodeKind::CONCRETE {
        types.push(
            MessageType::new(
                &scene_add_type(kind),
                ByKey,
                &format!("Create or replace a {} node.", kind.as_str()),
            )
            .field("path", FieldType::String)
            .field("wxyz", FieldType::quat())
            .field("position", FieldType::vec3())
            .field("visible", FieldType::Bool)
            .field("clickable", FieldType::Bool)
            .fields(
                kind.prop_specs()
                    .iter()
                    .map(|s| (s.name.to_owned(), s.wire_type())),
            ),
        );
    }
    types.extend([
        MessageType::new(SCENE_SET_PROP, ByKey, "Set one kind-specific node property.")
            .field("path", FieldType::String)
            .field("prop", FieldType::String)
            .fields(value_slots()),
        MessageType::new(SCENE_SET_POSE, ByKey, "Set a node's local pose.")
            .field("path", FieldType::String)
            .field("wxyz", FieldType::quat())
            .field("position", FieldType::vec3()),
        MessageType::new(SCENE_SET_VISIBLE, ByKey, "Set a node's own visibility flag.")
            .field("path", FieldType::String)
            .field("visible", FieldType::Bool),
        MessageType::new(SCENE_SET_CLICKABLE, ByKey, "Enable or disable click reporting for a node.")
            .field("path", FieldType::String)
            .field("clickable", FieldType::Bool),
        MessageType::new(SCENE_REMOVE, PurgePrefix, "Remove a node and its subtree.")
            .field("path", FieldType::String),
        MessageType::new(SCENE_CLICK, None, "Client click on a clickable node.")
            .field("path", FieldType::String)
            .field("ray_origin", FieldType::vec3())
            .field("ray_direction", FieldType::vec3())
            .field("screen_pos", FieldType::vec2()),
    ]);

    for kind in GuiKind::ALL {
        let mut ty = MessageType::new(
            &gui_add_type(kind),
            ByKey,
            &format!("Create a {} element.", kind.as_str()),
        )
        .field("uid", FieldType::Int)
        .field("container_uid", FieldType::Int)
        .field("order", FieldType::Int)
        .fields(
            kind.prop_specs()
                .iter()
                .map(|s| (s.name.to_owned(), s.wire_type())),
        );
        if let Some(vt) = kind.value_type() {
            ty = ty.field("value", vt);
        }
        types.push(ty);
    }
    types.extend([
        MessageType::new(GUI_SET_PROP, ByKey, "Set one element property.")
            .field("uid", FieldType::Int)
            .field("prop", FieldType::String)
            .fields(value_slots()),
        MessageType::new(GUI_SET_VALUE, ByKey, "Server-side value write.")
            .field("uid", FieldType::Int)
            .fields(value_slots()),
        MessageType::new(
            GUI_REMOVE,
            PurgePrefix,
            "Remove an element; `uids` lists it and everything it contained.",
        )
        .field("uid", FieldType::Int)
        .field("uids", FieldType::list(FieldType::Int)),
        MessageType::new(GUI_UPDATE, None, "Client-side value change or button click.")
            .field("uid", FieldType::Int)
            .fields(value_slots()),
        camera_fields(MessageType::new(CAMERA_SET, ByKey, "Move one client's camera.")),
        camera_fields(MessageType::new(CAMERA_REPORT, None, "Client camera state, throttled.")),
    ]);
    types
}
