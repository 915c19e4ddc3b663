//! Typed view of the wire messages.
//!
//! [`Wire`] is what the server, the mirror and the transport reason about;
//! [`Wire::to_message`] and [`Wire::from_message`] convert to and from the
//! dynamically typed [`Message`] the codec handles.

use thiserror::Error;

use crate::gui::{GuiElement, GuiKind, Uid};
use crate::scene::{NodeKind, Pose, PoseError, SceneError, SceneNode, ScenePath};
use crate::schema::messages::{self as m, gui_add_type, scene_add_type};
use crate::schema::{Message, Props, Value};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProtocolError {
    #[error("{type_name}: {reason}")]
    Malformed { type_name: String, reason: String },
    #[error("{0}: value cannot be carried in a value slot")]
    Unrepresentable(String),
    #[error("unexpected message {0}")]
    Unexpected(String),
}

impl ProtocolError {
    fn malformed(msg: &Message, reason: impl Into<String>) -> Self {
        ProtocolError::Malformed {
            type_name: msg.type_name.clone(),
            reason: reason.into(),
        }
    }
}

/// A camera as reported by, or pushed to, one client.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraState {
    pub pose: Pose,
    /// Vertical field of view, radians, in `(0, π)`.
    pub fov: f64,
    pub aspect: f64,
    pub look_at: [f64; 3],
}

impl CameraState {
    pub fn new(pose: Pose, fov: f64, aspect: f64, look_at: [f64; 3]) -> Result<Self, String> {
        let cam = Self {
            pose,
            fov,
            aspect,
            look_at,
        };
        cam.validate()?;
        Ok(cam)
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.fov > 0.0 && self.fov < std::f64::consts::PI) {
            return Err(format!("camera fov {} outside (0, π)", self.fov));
        }
        if !(self.aspect > 0.0 && self.aspect.is_finite()) {
            return Err(format!("camera aspect {} must be positive", self.aspect));
        }
        if self.look_at.iter().any(|x| !x.is_finite()) {
            return Err("camera look_at must be finite".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Wire {
    Hello {
        schema_hash: String,
    },
    Welcome {
        client_id: u64,
        schema_hash: String,
    },
    Reject {
        reason: String,
        server_hash: String,
        client_hash: String,
    },
    Ack {
        seq: u64,
    },
    SceneAdd {
        path: ScenePath,
        node: SceneNode,
    },
    SceneSetProp {
        path: ScenePath,
        prop: String,
        value: Value,
    },
    SceneSetPose {
        path: ScenePath,
        pose: Pose,
    },
    SceneSetVisible {
        path: ScenePath,
        visible: bool,
    },
    SceneSetClickable {
        path: ScenePath,
        clickable: bool,
    },
    SceneRemove {
        path: ScenePath,
    },
    SceneClick {
        path: ScenePath,
        ray_origin: [f64; 3],
        ray_direction: [f64; 3],
        screen_pos: [f64; 2],
    },
    GuiAdd(GuiElement),
    GuiSetProp {
        uid: Uid,
        prop: String,
        value: Value,
    },
    GuiSetValue {
        uid: Uid,
        value: Value,
    },
    GuiRemove {
        uid: Uid,
        /// The element and everything it contained.
        uids: Vec<Uid>,
    },
    GuiUpdate {
        uid: Uid,
        value: Value,
    },
    CameraSet(CameraState),
    CameraReport(CameraState),
}

fn slot_for(value: &Value) -> Option<&'static str> {
    let all = |items: &[Value], f: fn(&Value) -> bool| items.iter().all(f);
    Some(match value {
        Value::Bool(_) => "bool",
        Value::Int(_) => "int",
        Value::Float(_) => "float",
        Value::String(_) => "string",
        Value::Bytes(_) => "bytes",
        Value::Float32Array(_) => "float32_array",
        Value::Tuple(t) if t.len() == 3 && all(t, |v| matches!(v, Value::Float(_))) => "vec3",
        Value::Tuple(t) if t.len() == 3 && all(t, |v| matches!(v, Value::Int(_))) => "rgb",
        Value::List(l) if all(l, |v| matches!(v, Value::String(_))) => "strings",
        _ => return None,
    })
}

const SLOTS: [&str; 9] = [
    "bool",
    "int",
    "float",
    "string",
    "bytes",
    "float32_array",
    "vec3",
    "rgb",
    "strings",
];

fn put_value(msg: Message, value: &Value) -> Result<Message, ProtocolError> {
    let slot = slot_for(value).ok_or_else(|| ProtocolError::Unrepresentable(msg.type_name.clone()))?;
    Ok(msg.with(slot, value.clone()))
}

fn take_value(msg: &Message) -> Result<Value, ProtocolError> {
    let mut found = SLOTS.iter().filter_map(|s| msg.get(s));
    match (found.next(), found.next()) {
        (Some(v), None) => Ok(v.clone()),
        (None, _) => Err(ProtocolError::malformed(msg, "no value slot set")),
        (Some(_), Some(_)) => Err(ProtocolError::malformed(msg, "more than one value slot set")),
    }
}

fn pose_fields(msg: Message, pose: &Pose) -> Message {
    msg.with("wxyz", Value::quat(pose.wxyz()))
        .with("position", Value::vec3(pose.position()))
}

fn camera_message(type_name: &str, cam: &CameraState) -> Message {
    pose_fields(Message::new(type_name), &cam.pose)
        .with("fov", cam.fov)
        .with("aspect", cam.aspect)
        .with("look_at", Value::vec3(cam.look_at))
}

impl Wire {
    pub fn to_message(&self) -> Result<Message, ProtocolError> {
        Ok(match self {
            Wire::Hello { schema_hash } => Message::new(m::HELLO).with("schema_hash", schema_hash.as_str()),
            Wire::Welcome {
                client_id,
                schema_hash,
            } => Message::new(m::WELCOME)
                .with("client_id", *client_id)
                .with("schema_hash", schema_hash.as_str()),
            Wire::Reject {
                reason,
                server_hash,
                client_hash,
            } => Message::new(m::REJECT)
                .with("reason", reason.as_str())
                .with("server_hash", server_hash.as_str())
                .with("client_hash", client_hash.as_str()),
            Wire::Ack { seq } => Message::new(m::ACK).with("seq", *seq),
            Wire::SceneAdd { path, node } => {
                let mut msg = pose_fields(
                    Message::new(&scene_add_type(node.kind)).with("path", path.as_str()),
                    &node.pose,
                )
                .with("visible", node.visible)
                .with("clickable", node.clickable);
                for (k, v) in &node.props {
                    msg.set(k, v.clone());
                }
                msg
            }
            Wire::SceneSetProp { path, prop, value } => put_value(
                Message::new(m::SCENE_SET_PROP)
                    .with("path", path.as_str())
                    .with("prop", prop.as_str()),
                value,
            )?,
            Wire::SceneSetPose { path, pose } => {
                pose_fields(Message::new(m::SCENE_SET_POSE).with("path", path.as_str()), pose)
            }
            Wire::SceneSetVisible { path, visible } => Message::new(m::SCENE_SET_VISIBLE)
                .with("path", path.as_str())
                .with("visible", *visible),
            Wire::SceneSetClickable { path, clickable } => Message::new(m::SCENE_SET_CLICKABLE)
                .with("path", path.as_str())
                .with("clickable", *clickable),
            Wire::SceneRemove { path } => Message::new(m::SCENE_REMOVE).with("path", path.as_str()),
            Wire::SceneClick {
                path,
                ray_origin,
                ray_direction,
                screen_pos,
            } => Message::new(m::SCENE_CLICK)
                .with("path", path.as_str())
                .with("ray_origin", Value::vec3(*ray_origin))
                .with("ray_direction", Value::vec3(*ray_direction))
                .with("screen_pos", Value::vec2(*screen_pos)),
            Wire::GuiAdd(el) => {
                let mut msg = Message::new(&gui_add_type(el.kind))
                    .with("uid", el.uid)
                    .with("container_uid", el.container_uid)
                    .with("order", el.order);
                for (k, v) in &el.props {
                    msg.set(k, v.clone());
                }
                if let Some(v) = &el.value {
                    msg.set("value", v.clone());
                }
                msg
            }
            Wire::GuiSetProp { uid, prop, value } => put_value(
                Message::new(m::GUI_SET_PROP)
                    .with("uid", *uid)
                    .with("prop", prop.as_str()),
                value,
            )?,
            Wire::GuiSetValue { uid, value } => {
                put_value(Message::new(m::GUI_SET_VALUE).with("uid", *uid), value)?
            }
            Wire::GuiRemove { uid, uids } => Message::new(m::GUI_REMOVE)
                .with("uid", *uid)
                .with("uids", Value::List(uids.iter().map(|u| Value::from(*u)).collect())),
            Wire::GuiUpdate { uid, value } => {
                put_value(Message::new(m::GUI_UPDATE).with("uid", *uid), value)?
            }
            Wire::CameraSet(cam) => camera_message(m::CAMERA_SET, cam),
            Wire::CameraReport(cam) => camera_message(m::CAMERA_REPORT, cam),
        })
    }

    /// Interprets a registry-valid message.
    pub fn from_message(msg: &Message) -> Result<Wire, ProtocolError> {
        let r = Reader(msg);
        let t = msg.type_name.as_str();
        Ok(match t {
            m::HELLO => Wire::Hello {
                schema_hash: r.string("schema_hash")?,
            },
            m::WELCOME => Wire::Welcome {
                client_id: r.uint("client_id")?,
                schema_hash: r.string("schema_hash")?,
            },
            m::REJECT => Wire::Reject {
                reason: r.string("reason")?,
                server_hash: r.string("server_hash")?,
                client_hash: r.string("client_hash")?,
            },
            m::ACK => Wire::Ack { seq: r.uint("seq")? },
            m::SCENE_SET_PROP => Wire::SceneSetProp {
                path: r.path()?,
                prop: r.string("prop")?,
                value: take_value(msg)?,
            },
            m::SCENE_SET_POSE => Wire::SceneSetPose {
                path: r.path()?,
                pose: r.pose()?,
            },
            m::SCENE_SET_VISIBLE => Wire::SceneSetVisible {
                path: r.path()?,
                visible: r.boolean("visible")?,
            },
            m::SCENE_SET_CLICKABLE => Wire::SceneSetClickable {
                path: r.path()?,
                clickable: r.boolean("clickable")?,
            },
            m::SCENE_REMOVE => Wire::SceneRemove { path: r.path()? },
            m::SCENE_CLICK => Wire::SceneClick {
                path: r.path()?,
                ray_origin: r.floats("ray_origin")?,
                ray_direction: r.floats("ray_direction")?,
                screen_pos: r.floats("screen_pos")?,
            },
            m::GUI_SET_PROP => Wire::GuiSetProp {
                uid: r.uint("uid")?,
                prop: r.string("prop")?,
                value: take_value(msg)?,
            },
            m::GUI_SET_VALUE => Wire::GuiSetValue {
                uid: r.uint("uid")?,
                value: take_value(msg)?,
            },
            m::GUI_REMOVE => Wire::GuiRemove {
                uid: r.uint("uid")?,
                uids: r
                    .get("uids")?
                    .as_list()
                    .unwrap_or(&[])
                    .iter()
                    .map(|v| {
                        v.as_i64()
                            .and_then(|i| u64::try_from(i).ok())
                            .ok_or_else(|| ProtocolError::malformed(msg, "uids must be non-negative"))
                    })
                    .collect::<Result<_, _>>()?,
            },
            m::GUI_UPDATE => Wire::GuiUpdate {
                uid: r.uint("uid")?,
                value: take_value(msg)?,
            },
            m::CAMERA_SET => Wire::CameraSet(r.camera()?),
            m::CAMERA_REPORT => Wire::CameraReport(r.camera()?),
            _ => {
                if let Some(kind) = NodeKind::CONCRETE.into_iter().find(|k| scene_add_type(*k) == t) {
                    let props: Props = kind
                        .prop_specs()
                        .iter()
                        .filter_map(|s| msg.get(s.name).map(|v| (s.name.to_owned(), v.clone())))
                        .collect();
                    Wire::SceneAdd {
                        path: r.path()?,
                        node: SceneNode::new(kind, props)
                            .with_pose(r.pose()?)
                            .with_visible(r.boolean("visible")?)
                            .with_clickable(r.boolean("clickable")?),
                    }
                } else if let Some(kind) = GuiKind::ALL.into_iter().find(|k| gui_add_type(*k) == t) {
                    let props: Props = kind
                        .prop_specs()
                        .iter()
                        .filter_map(|s| msg.get(s.name).map(|v| (s.name.to_owned(), v.clone())))
                        .collect();
                    Wire::GuiAdd(GuiElement {
                        uid: r.uint("uid")?,
                        kind,
                        container_uid: r.uint("container_uid")?,
                        order: r.uint("order")?,
                        props,
                        value: msg.get("value").cloned(),
                    })
                } else {
                    return Err(ProtocolError::Unexpected(t.to_owned()));
                }
            }
        })
    }
}

struct Reader<'a>(&'a Message);

impl Reader<'_> {
    fn get(&self, field: &str) -> Result<&Value, ProtocolError> {
        self.0
            .get(field)
            .ok_or_else(|| ProtocolError::malformed(self.0, format!("missing {field}")))
    }

    fn bad(&self, field: &str) -> ProtocolError {
        ProtocolError::malformed(self.0, format!("bad {field}"))
    }

    fn string(&self, field: &str) -> Result<String, ProtocolError> {
        self.get(field)?
            .as_str()
            .map(str::to_owned)
            .ok_or_else(|| self.bad(field))
    }

    fn uint(&self, field: &str) -> Result<u64, ProtocolError> {
        self.get(field)?
            .as_i64()
            .and_then(|i| u64::try_from(i).ok())
            .ok_or_else(|| self.bad(field))
    }

    fn boolean(&self, field: &str) -> Result<bool, ProtocolError> {
        self.get(field)?.as_bool().ok_or_else(|| self.bad(field))
    }

    fn floats<const N: usize>(&self, field: &str) -> Result<[f64; N], ProtocolError> {
        self.get(field)?
            .as_f64_array::<N>()
            .ok_or_else(|| self.bad(field))
    }

    fn path(&self) -> Result<ScenePath, ProtocolError> {
        ScenePath::parse(&self.string("path")?)
            .map_err(|e| ProtocolError::malformed(self.0, SceneError::from(e).to_string()))
    }

    fn pose(&self) -> Result<Pose, ProtocolError> {
        Pose::new(self.floats("wxyz")?, self.floats("position")?)
            .map_err(|e: PoseError| ProtocolError::malformed(self.0, e.to_string()))
    }

    fn camera(&self) -> Result<CameraState, ProtocolError> {
        CameraState::new(
            self.pose()?,
            self.get("fov")?.as_f64().ok_or_else(|| self.bad("fov"))?,
            self.get("aspect")?.as_f64().ok_or_else(|| self.bad("aspect"))?,
            self.floats("look_at")?,
        )
        .map_err(|e| ProtocolError::malformed(self.0, e))
    }
}
