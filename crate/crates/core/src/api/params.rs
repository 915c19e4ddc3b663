//! Construction parameters for each scene node kind.
//!
//! Every struct implements [`Default`], so callers spell out only what
//! they care about:
//!
//! ```
//! use scenecast::api::BoxParams;
//! let p = BoxParams { color: [255, 0, 0], ..Default::default() };
//! assert_eq!(p.dimensions, [1.0, 1.0, 1.0]);
//! ```

use crate::scene::{pack_faces, NodeKind, Pose, SceneNode};
use crate::schema::{Props, Value};

/// Anything that can become a scene node.
pub trait NodeParams {
    fn into_node(self) -> SceneNode;
}

fn node(kind: NodeKind, pose: Pose, visible: bool, props: impl IntoIterator<Item = (&'static str, Value)>) -> SceneNode {
    let props: Props = props.into_iter().map(|(k, v)| (k.to_owned(), v)).collect();
    SceneNode::new(kind, props)
        .with_pose(pose)
        .with_visible(visible)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameParams {
    pub axes_length: f64,
    pub axes_radius: f64,
    pub show_axes: bool,
    pub pose: Pose,
    pub visible: bool,
}

impl Default for FrameParams {
    fn default() -> Self {
        Self {
            axes_length: 0.5,
            axes_radius: 0.025,
            show_axes: true,
            pose: Pose::IDENTITY,
            visible: true,
        }
    }
}

impl NodeParams for FrameParams {
    fn into_node(self) -> SceneNode {
        node(
            NodeKind::Frame,
            self.pose,
            self.visible,
            [
                ("axes_length", self.axes_length.into()),
                ("axes_radius", self.axes_radius.into()),
                ("show_axes", self.show_axes.into()),
            ],
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridParams {
    pub width: f64,
    pub height: f64,
    pub cell_size: f64,
    pub color: [u8; 3],
    pub pose: Pose,
    pub visible: bool,
}

impl Default for GridParams {
    fn default() -> Self {
        Self {
            width: 10.0,
            height: 10.0,
            cell_size: 1.0,
            color: [200, 200, 200],
            pose: Pose::IDENTITY,
            visible: true,
        }
    }
}

impl NodeParams for GridParams {
    fn into_node(self) -> SceneNode {
        node(
            NodeKind::Grid,
            self.pose,
            self.visible,
            [
                ("width", self.width.into()),
                ("height", self.height.into()),
                ("cell_size", self.cell_size.into()),
                ("color", self.color.into()),
            ],
        )
    }
}

/// Points as flat `xyz` triples with one `rgb` triple per point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloudParams {
    pub positions: Vec<f32>,
    pub colors: Vec<u8>,
    pub point_size: f64,
    pub pose: Pose,
    pub visible: bool,
}

impl Default for PointCloudParams {
    fn default() -> Self {
        Self {
            positions: Vec::new(),
            colors: Vec::new(),
            point_size: 0.01,
            pose: Pose::IDENTITY,
            visible: true,
        }
    }
}

impl NodeParams for PointCloudParams {
    fn into_node(self) -> SceneNode {
        node(
            NodeKind::PointCloud,
            self.pose,
            self.visible,
            [
                ("positions", self.positions.into()),
                ("colors", self.colors.into()),
                ("point_size", self.point_size.into()),
            ],
        )
    }
}

/// Segments as flat `x0 y0 z0 x1 y1 z1` sextuples, one color per endpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct LineSegmentsParams {
    pub points: Vec<f32>,
    pub colors: Vec<u8>,
    pub line_width: f64,
    pub pose: Pose,
    pub visible: bool,
}

impl Default for LineSegmentsParams {
    fn default() -> Self {
        Self {
            points: Vec::new(),
            colors: Vec::new(),
            line_width: 1.0,
            pose: Pose::IDENTITY,
            visible: true,
        }
    }
}

impl NodeParams for LineSegmentsParams {
    fn into_node(self) -> SceneNode {
        node(
            NodeKind::LineSegments,
            self.pose,
            self.visible,
            [
                ("points", self.points.into()),
                ("colors", self.colors.into()),
                ("line_width", self.line_width.into()),
            ],
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeshParams {
    pub vertices: Vec<f32>,
    pub faces: Vec<[u32; 3]>,
    pub color: [u8; 3],
    pub wireframe: bool,
    pub pose: Pose,
    pub visible: bool,
}

impl Default for MeshParams {
    fn default() -> Self {
        Self {
            vertices: Vec::new(),
            faces: Vec::new(),
            color: [180, 180, 180],
            wireframe: false,
            pose: Pose::IDENTITY,
            visible: true,
        }
    }
}

impl NodeParams for MeshParams {
    fn into_node(self) -> SceneNode {
        node(
            NodeKind::Mesh,
            self.pose,
            self.visible,
            [
                ("vertices", self.vertices.into()),
                ("faces", pack_faces(&self.faces).into()),
                ("color", self.color.into()),
                ("wireframe", self.wireframe.into()),
            ],
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoxParams {
    pub dimensions: [f64; 3],
    pub color: [u8; 3],
    pub wireframe: bool,
    pub pose: Pose,
    pub visible: bool,
}

impl Default for BoxParams {
    fn default() -> Self {
        Self {
            dimensions: [1.0, 1.0, 1.0],
            color: [255, 255, 255],
            wireframe: false,
            pose: Pose::IDENTITY,
            visible: true,
        }
    }
}

impl NodeParams for BoxParams {
    fn into_node(self) -> SceneNode {
        node(
            NodeKind::Box,
            self.pose,
            self.visible,
            [
                ("dimensions", self.dimensions.into()),
                ("color", self.color.into()),
                ("wireframe", self.wireframe.into()),
            ],
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IcosphereParams {
    pub radius: f64,
    pub subdivisions: i64,
    pub color: [u8; 3],
    pub pose: Pose,
    pub visible: bool,
}

impl Default for IcosphereParams {
    fn default() -> Self {
        Self {
            radius: 1.0,
            subdivisions: 3,
            color: [255, 255, 255],
            pose: Pose::IDENTITY,
            visible: true,
        }
    }
}

impl NodeParams for IcosphereParams {
    fn into_node(self) -> SceneNode {
        node(
            NodeKind::Icosphere,
            self.pose,
            self.visible,
            [
                ("radius", self.radius.into()),
                ("subdivisions", self.subdivisions.into()),
                ("color", self.color.into()),
            ],
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CameraFrustumParams {
    /// Vertical field of view in radians.
    pub fov: f64,
    pub aspect: f64,
    pub scale: f64,
    pub color: [u8; 3],
    pub pose: Pose,
    pub visible: bool,
}

impl Default for CameraFrustumParams {
    fn default() -> Self {
        Self {
            fov: std::f64::consts::FRAC_PI_3,
            aspect: 4.0 / 3.0,
            scale: 0.3,
            color: [20, 20, 20],
            pose: Pose::IDENTITY,
            visible: true,
        }
    }
}

impl NodeParams for CameraFrustumParams {
    fn into_node(self) -> SceneNode {
        node(
            NodeKind::CameraFrustum,
            self.pose,
            self.visible,
            [
                ("fov", self.fov.into()),
                ("aspect", self.aspect.into()),
                ("scale", self.scale.into()),
                ("color", self.color.into()),
            ],
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabelParams {
    pub text: String,
    pub pose: Pose,
    pub visible: bool,
}

impl Default for LabelParams {
    fn default() -> Self {
        Self {
            text: String::new(),
            pose: Pose::IDENTITY,
            visible: true,
        }
    }
}

impl NodeParams for LabelParams {
    fn into_node(self) -> SceneNode {
        node(NodeKind::Label, self.pose, self.visible, [("text", self.text.into())])
    }
}

/// An RGB8 image shown as a textured quad of `render_width × render_height`
/// meters.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageParams {
    pub width: i64,
    pub height: i64,
    pub rgb: Vec<u8>,
    pub render_width: f64,
    pub render_height: f64,
    pub pose: Pose,
    pub visible: bool,
}

impl Default for ImageParams {
    fn default() -> Self {
        Self {
            width: 1,
            height: 1,
            rgb: vec![0, 0, 0],
            render_width: 1.0,
            render_height: 1.0,
            pose: Pose::IDENTITY,
            visible: true,
        }
    }
}

impl NodeParams for ImageParams {
    fn into_node(self) -> SceneNode {
        node(
            NodeKind::Image,
            self.pose,
            self.visible,
            [
                ("width", self.width.into()),
                ("height", self.height.into()),
                ("rgb", self.rgb.into()),
                ("render_width", self.render_width.into()),
                ("render_height", self.render_height.into()),
            ],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid_nodes() {
        let nodes = [
            FrameParams::default().into_node(),
            GridParams::default().into_node(),
            PointCloudParams::default().into_node(),
            LineSegmentsParams::default().into_node(),
            MeshParams::default().into_node(),
            BoxParams::default().into_node(),
            IcosphereParams::default().into_node(),
            CameraFrustumParams::default().into_node(),
            LabelParams::default().into_node(),
            ImageParams::default().into_node(),
        ];
        for n in &nodes {
            n.validate().unwrap();
        }
        let kinds: Vec<_> = nodes.iter().map(|n| n.kind).collect();
        assert_eq!(kinds, NodeKind::CONCRETE);
    }
}
