//! Random well-typed wire messages for codec round trips.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::path;
use scenecast::api::{
    BoxParams, CameraFrustumParams, FrameParams, GridParams, IcosphereParams, ImageParams, LabelParams,
    LineSegmentsParams, MeshParams, NodeParams, PointCloudParams,
};
use scenecast::gui::{base_props, GuiElement, GuiKind};
use scenecast::protocol::{CameraState, Wire};
use scenecast::scene::{Pose, SceneNode};
use scenecast::schema::{decode_batch, encode_batch, Message, Value};

fn f(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(-1e3..1e3)
}

fn pos(rng: &mut ChaCha8Rng) -> f64 {
    rng.random_range(0.01..10.0)
}

fn rgb(rng: &mut ChaCha8Rng) -> [u8; 3] {
    [rng.random(), rng.random(), rng.random()]
}

fn vec3(rng: &mut ChaCha8Rng) -> [f64; 3] {
    [f(rng), f(rng), f(rng)]
}

fn floats(rng: &mut ChaCha8Rng, n: usize) -> Vec<f32> {
    (0..n).map(|_| rng.random_range(-100.0f32..100.0)).collect()
}

fn bytes(rng: &mut ChaCha8Rng, n: usize) -> Vec<u8> {
    (0..n).map(|_| rng.random()).collect()
}

fn text(rng: &mut ChaCha8Rng) -> String {
    let n = rng.random_range(0..12);
    (0..n)
        .map(|_| ['a', 'Z', '0', ' ', 'é', '→', '"', '\\'][rng.random_range(0..8)])
        .collect()
}

fn random_path(rng: &mut ChaCha8Rng) -> scenecast::scene::ScenePath {
    let depth = rng.random_range(1..4);
    let s: String = (0..depth).map(|i| format!("/n{}_{}", i, rng.random_range(0..50))).collect();
    path(&s)
}

fn pose(rng: &mut ChaCha8Rng) -> Pose {
    let axis = [f(rng), f(rng), f(rng) + 1e3 + 1.0];
    Pose::from_axis_angle(axis, rng.random_range(-3.0..3.0), vec3(rng)).unwrap()
}

fn node(rng: &mut ChaCha8Rng) -> SceneNode {
    let p = pose(rng);
    let visible = rng.random_bool(0.5);
    let n = rng.random_range(0..20);
    let node = match rng.random_range(0..10) {
        0 => FrameParams {
            axes_length: pos(rng),
            axes_radius: pos(rng),
            show_axes: rng.random_bool(0.5),
            pose: p,
            visible,
        }
        .into_node(),
        1 => GridParams {
            width: pos(rng),
            height: pos(rng),
            cell_size: pos(rng),
            color: rgb(rng),
            pose: p,
            visible,
        }
        .into_node(),
        2 => PointCloudParams {
            positions: floats(rng, 3 * n),
            colors: bytes(rng, 3 * n),
            point_size: pos(rng),
            pose: p,
            visible,
        }
        .into_node(),
        3 => LineSegmentsParams {
            points: floats(rng, 6 * n),
            colors: bytes(rng, 3 * n),
            line_width: pos(rng),
            pose: p,
            visible,
        }
        .into_node(),
        4 => MeshParams {
            vertices: floats(rng, 9),
            faces: vec![[0, 1, 2]; n],
            color: rgb(rng),
            wireframe: rng.random_bool(0.5),
            pose: p,
            visible,
        }
        .into_node(),
        5 => BoxParams {
            dimensions: [pos(rng), pos(rng), pos(rng)],
            color: rgb(rng),
            wireframe: rng.random_bool(0.5),
            pose: p,
            visible,
        }
        .into_node(),
        6 => IcosphereParams {
            radius: pos(rng),
            subdivisions: rng.random_range(0..=6),
            color: rgb(rng),
            pose: p,
            visible,
        }
        .into_node(),
        7 => CameraFrustumParams {
            fov: rng.random_range(0.1..3.0),
            aspect: pos(rng),
            scale: pos(rng),
            color: rgb(rng),
            pose: p,
            visible,
        }
        .into_node(),
        8 => LabelParams {
            text: text(rng),
            pose: p,
            visible,
        }
        .into_node(),
        _ => {
            let (w, h) = (rng.random_range(1..5), rng.random_range(1..5));
            ImageParams {
                width: w,
                height: h,
                rgb: bytes(rng, (3 * w * h) as usize),
                render_width: pos(rng),
                render_height: pos(rng),
                pose: p,
                visible,
            }
            .into_node()
        }
    };
    node.with_clickable(rng.random_bool(0.5))
}

fn value(rng: &mut ChaCha8Rng) -> Value {
    match rng.random_range(0..9) {
        0 => rng.random_bool(0.5).into(),
        1 => Value::Int(rng.random()),
        2 => f(rng).into(),
        3 => text(rng).into(),
        4 => {
            let n = rng.random_range(0..16);
            bytes(rng, n).into()
        }
        5 => {
            let n = rng.random_range(0..16);
            floats(rng, n).into()
        }
        6 => vec3(rng).into(),
        7 => rgb(rng).into(),
        _ => {
            let items: Vec<String> = (0..rng.random_range(0..4)).map(|_| text(rng)).collect();
            Value::strings(&items)
        }
    }
}

fn gui_element(rng: &mut ChaCha8Rng) -> GuiElement {
    let kind = GuiKind::ALL[rng.random_range(0..GuiKind::ALL.len())];
    let mut props = base_props(&text(rng));
    let mut put = |k: &str, v: Value| {
        props.insert(k.into(), v);
    };
    let value: Option<Value> = match kind {
        GuiKind::Button => {
            if rng.random_bool(0.5) {
                put("color", rgb(rng).into());
            }
            Some(Value::Int(rng.random_range(0..1000)))
        }
        GuiKind::Checkbox => Some(rng.random_bool(0.5).into()),
        GuiKind::Slider => {
            put("min", 0.0.into());
            put("max", 10.0.into());
            put("step", 0.5.into());
            Some(rng.random_range(0.0..10.0).into())
        }
        GuiKind::Number => {
            put("step", pos(rng).into());
            Some(f(rng).into())
        }
        GuiKind::Text => Some(text(rng).into()),
        GuiKind::Dropdown => {
            put("options", Value::strings(&["a", "b"]));
            Some("b".into())
        }
        GuiKind::Rgb => Some(rgb(rng).into()),
        GuiKind::Vector3 => {
            put("step", pos(rng).into());
            Some(vec3(rng).into())
        }
        GuiKind::Folder => {
            put("expanded", rng.random_bool(0.5).into());
            None
        }
        GuiKind::Markdown => {
            put("content", text(rng).into());
            None
        }
        GuiKind::TabGroup | GuiKind::Tab => None,
    };
    GuiElement {
        uid: rng.random_range(1..1 << 40),
        kind,
        container_uid: rng.random_range(0..100),
        order: rng.random_range(0..1 << 40),
        props,
        value,
    }
}

fn camera(rng: &mut ChaCha8Rng) -> CameraState {
    CameraState::new(pose(rng), rng.random_range(0.1..3.0), pos(rng), vec3(rng)).unwrap()
}

/// A random well-typed message of any kind.
pub fn random_wire(rng: &mut ChaCha8Rng) -> Wire {
    match rng.random_range(0..19) {
        0 => Wire::Hello { schema_hash: text(rng) },
        1 => Wire::Welcome {
            client_id: rng.random_range(0..1 << 50),
            schema_hash: text(rng),
        },
        2 => Wire::Reject {
            reason: text(rng),
            server_hash: text(rng),
            client_hash: text(rng),
        },
        3 => Wire::Ack {
            seq: rng.random_range(0..1 << 50),
        },
        4 | 5 => Wire::SceneAdd {
            path: random_path(rng),
            node: node(rng),
        },
        6 => Wire::SceneSetProp {
            path: random_path(rng),
            prop: text(rng),
            value: value(rng),
        },
        7 => Wire::SceneSetPose {
            path: random_path(rng),
            pose: pose(rng),
        },
        8 => Wire::SceneSetVisible {
            path: random_path(rng),
            visible: rng.random_bool(0.5),
        },
        9 => Wire::SceneSetClickable {
            path: random_path(rng),
            clickable: rng.random_bool(0.5),
        },
        10 => Wire::SceneRemove { path: random_path(rng) },
        11 => Wire::SceneClick {
            path: random_path(rng),
            ray_origin: vec3(rng),
            ray_direction: vec3(rng),
            screen_pos: [rng.random(), rng.random()],
        },
        12 | 13 => Wire::GuiAdd(gui_element(rng)),
        14 => Wire::GuiSetProp {
            uid: rng.random_range(0..1 << 40),
            prop: text(rng),
            value: value(rng),
        },
        15 => Wire::GuiSetValue {
            uid: rng.random_range(0..1 << 40),
            value: value(rng),
        },
        16 => {
            let uids: Vec<u64> = (0..rng.random_range(1..5)).map(|_| rng.random_range(0..1000)).collect();
            Wire::GuiRemove { uid: uids[0], uids }
        }
        17 => Wire::GuiUpdate {
            uid: rng.random_range(0..1 << 40),
            value: value(rng),
        },
        _ => {
            if rng.random_bool(0.5) {
                Wire::CameraSet(camera(rng))
            } else {
                Wire::CameraReport(camera(rng))
            }
        }
    }
}

/// Encodes `n` random messages per frame until `total` messages have gone
/// through, checking each decoded message field by field. Returns how many
/// were checked.
pub fn round_trip_random(rng: &mut ChaCha8Rng, total: usize) -> usize {
    let mut done = 0;
    while done < total {
        let n = rng.random_range(1..8);
        let wires: Vec<Wire> = (0..n).map(|_| random_wire(rng)).collect();
        let msgs: Vec<Message> = wires.iter().map(|w| w.to_message().unwrap()).collect();
        let seq = rng.random_range(0..1u64 << 60);
        let frame = encode_batch(seq, &msgs).unwrap();
        let batch = decode_batch(&frame).unwrap();
        assert_eq!(batch.seq, seq);
        assert_eq!(batch.messages.len(), msgs.len());
        for ((decoded, original), wire) in batch.messages.iter().zip(&msgs).zip(&wires) {
            assert_eq!(decoded.type_name, original.type_name);
            assert_eq!(
                decoded.fields.keys().collect::<Vec<_>>(),
                original.fields.keys().collect::<Vec<_>>()
            );
            for (name, value) in &original.fields {
                assert_eq!(decoded.fields.get(name), Some(value), "{}.{name}", original.type_name);
            }
            assert_eq!(&Wire::from_message(decoded).unwrap(), wire);
        }
        done += n;
    }
    done
}
