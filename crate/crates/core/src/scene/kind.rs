use std::fmt;
use std::str::FromStr;

use crate::props::{self, PropCheck, PropSpec};
use crate::schema::{FieldType, Props, Value};

/// Node kinds the scene graph can hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeKind {
    Frame,
    Grid,
    PointCloud,
    LineSegments,
    Mesh,
    Box,
    Icosphere,
    CameraFrustum,
    Label,
    Image,
    /// Auto-created ancestor with no properties of its own.
    Placeholder,
}

impl NodeKind {
    /// Kinds that can be created explicitly (everything but placeholder).
    pub const CONCRETE: [NodeKind; 10] = [
        NodeKind::Frame,
        NodeKind::Grid,
        NodeKind::PointCloud,
        NodeKind::LineSegments,
        NodeKind::Mesh,
        NodeKind::Box,
        NodeKind::Icosphere,
        NodeKind::CameraFrustum,
        NodeKind::Label,
        NodeKind::Image,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::Frame => "frame",
            NodeKind::Grid => "grid",
            NodeKind::PointCloud => "point_cloud",
            NodeKind::LineSegments => "line_segments",
            NodeKind::Mesh => "mesh",
            NodeKind::Box => "box",
            NodeKind::Icosphere => "icosphere",
            NodeKind::CameraFrustum => "camera_frustum",
            NodeKind::Label => "label",
            NodeKind::Image => "image",
            NodeKind::Placeholder => "placeholder",
        }
    }

    /// CamelCase name used in message type names.
    pub fn type_stem(self) -> &'static str {
        match self {
            NodeKind::Frame => "Frame",
            NodeKind::Grid => "Grid",
            NodeKind::PointCloud => "PointCloud",
            NodeKind::LineSegments => "LineSegments",
            NodeKind::Mesh => "Mesh",
            NodeKind::Box => "Box",
            NodeKind::Icosphere => "Icosphere",
            NodeKind::CameraFrustum => "CameraFrustum",
            NodeKind::Label => "Label",
            NodeKind::Image => "Image",
            NodeKind::Placeholder => "Placeholder",
        }
    }

    pub fn prop_specs(self) -> Vec<PropSpec> {
        use FieldType as F;
        use PropCheck as C;
        let pos = |name| PropSpec::new(name, F::Float).check(C::Positive);
        let color = || PropSpec::new("color", F::rgb()).check(C::Rgb);
        match self {
            NodeKind::Frame => vec![
                pos("axes_length"),
                pos("axes_radius"),
                PropSpec::new("show_axes", F::Bool),
            ],
            NodeKind::Grid => vec![pos("width"), pos("height"), pos("cell_size"), color()],
            NodeKind::PointCloud => vec![
                PropSpec::new("positions", F::Float32Array).check(C::LengthMultipleOf(3)),
                PropSpec::new("colors", F::Bytes).check(C::LengthMultipleOf(3)),
                pos("point_size"),
            ],
            NodeKind::LineSegments => vec![
                PropSpec::new("points", F::Float32Array).check(C::LengthMultipleOf(6)),
                PropSpec::new("colors", F::Bytes).check(C::LengthMultipleOf(3)),
                pos("line_width"),
            ],
            NodeKind::Mesh => vec![
                PropSpec::new("vertices", F::Float32Array).check(C::LengthMultipleOf(3)),
                // u32 little-endian vertex indices, three per face.
                PropSpec::new("faces", F::Bytes).check(C::LengthMultipleOf(12)),
                color(),
                PropSpec::new("wireframe", F::Bool),
            ],
            NodeKind::Box => vec![
                PropSpec::new("dimensions", F::vec3()).check(C::PositiveVec3),
                color(),
                PropSpec::new("wireframe", F::Bool),
            ],
            NodeKind::Icosphere => vec![
                pos("radius"),
                PropSpec::new("subdivisions", F::Int).check(C::IntRange(0, 6)),
                color(),
            ],
            NodeKind::CameraFrustum => vec![
                PropSpec::new("fov", F::Float).check(C::OpenInterval(0.0, std::f64::consts::PI)),
                pos("aspect"),
                pos("scale"),
                color(),
            ],
            NodeKind::Label => vec![PropSpec::new("text", F::String)],
            NodeKind::Image => vec![
                PropSpec::new("width", F::Int).check(C::IntRange(1, 1 << 16)),
                PropSpec::new("height", F::Int).check(C::IntRange(1, 1 << 16)),
                PropSpec::new("rgb", F::Bytes).check(C::LengthMultipleOf(3)),
                pos("render_width"),
                pos("render_height"),
            ],
            NodeKind::Placeholder => vec![],
        }
    }

    /// Full validation: every property present and well-typed, plus the
    /// cross-property consistency rules of the kind.
    pub fn validate_props(self, props: &Props) -> Result<(), String> {
        let specs = self.prop_specs();
        for name in props.keys() {
            if props::find(&specs, name).is_none() {
                return Err(format!("{} has no property {name:?}", self.as_str()));
            }
        }
        for spec in &specs {
            match props.get(spec.name) {
                Some(v) => spec.validate(v)?,
                None => return Err(format!("{} is missing property {:?}", self.as_str(), spec.name)),
            }
        }
        self.cross_check(props)
    }

    fn cross_check(self, props: &Props) -> Result<(), String> {
        let f32s = |k: &str| props.get(k).and_then(Value::as_f32_slice).map_or(0, <[f32]>::len);
        let bytes = |k: &str| props.get(k).and_then(Value::as_bytes).unwrap_or(&[]);
        match self {
            NodeKind::PointCloud => {
                let (n, c) = (f32s("positions"), bytes("colors").len());
                if n != c {
                    return Err(format!(
                        "point_cloud has {} positions but {} colors",
                        n / 3,
                        c / 3
                    ));
                }
            }
            NodeKind::LineSegments => {
                let (n, c) = (f32s("points"), bytes("colors").len());
                if n != c {
                    return Err(format!(
                        "line_segments has {} vertices but {} colors",
                        n / 3,
                        c / 3
                    ));
                }
            }
            NodeKind::Mesh => {
                let vertex_count = f32s("vertices") / 3;
                for (i, idx) in bytes("faces").chunks_exact(4).enumerate() {
                    let idx = u32::from_le_bytes([idx[0], idx[1], idx[2], idx[3]]) as usize;
                    if idx >= vertex_count {
                        return Err(format!(
                            "mesh face index {idx} (slot {i}) out of range for {vertex_count} vertices"
                        ));
                    }
                }
            }
            NodeKind::Image => {
                let w = props.get("width").and_then(Value::as_i64).unwrap_or(0);
                let h = props.get("height").and_then(Value::as_i64).unwrap_or(0);
                let len = bytes("rgb").len() as i64;
                if len != 3 * w * h {
                    return Err(format!("image {w}x{h} needs {} rgb bytes, got {len}", 3 * w * h));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NodeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NodeKind::CONCRETE
            .into_iter()
            .chain([NodeKind::Placeholder])
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown node kind {s:?}"))
    }
}

/// Packs mesh face indices into the little-endian blob form.
pub fn pack_faces(faces: &[[u32; 3]]) -> Vec<u8> {
    faces
        .iter()
        .flat_map(|f| f.iter().flat_map(|i| i.to_le_bytes()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frustum(fov: f64) -> Props {
        Props::from([
            ("fov".into(), Value::Float(fov)),
            ("aspect".into(), Value::Float(0.75)),
            ("scale".into(), Value::Float(0.3)),
            ("color".into(), Value::rgb([20, 20, 70])),
        ])
    }

    #[test]
    fn frustum_fov_must_be_inside_open_interval() {
        let k = NodeKind::CameraFrustum;
        assert!(k.validate_props(&frustum(std::f64::consts::FRAC_PI_2)).is_ok());
        assert!(k.validate_props(&frustum(0.0)).is_err());
        assert!(k.validate_props(&frustum(std::f64::consts::PI)).is_err());
        assert!(k.validate_props(&frustum(f64::NAN)).is_err());
    }

    #[test]
    fn mesh_face_indices_checked() {
        let mut p = Props::from([
            ("vertices".into(), Value::Float32Array(vec![0.0; 9])),
            ("faces".into(), Value::Bytes(pack_faces(&[[0, 1, 2]]))),
            ("color".into(), Value::rgb([1, 2, 3])),
            ("wireframe".into(), Value::Bool(false)),
        ]);
        assert!(NodeKind::Mesh.validate_props(&p).is_ok());
        p.insert("faces".into(), Value::Bytes(pack_faces(&[[0, 1, 3]])));
        assert!(NodeKind::Mesh.validate_props(&p).is_err());
    }

    #[test]
    fn kind_names_parse_back() {
        for k in NodeKind::CONCRETE {
            assert_eq!(k.as_str().parse::<NodeKind>().unwrap(), k);
        }
    }
}
