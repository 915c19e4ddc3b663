use std::sync::Arc;

use crate::protocol::Wire;
use crate::scene::{NodeKind, Pose, SceneNode, ScenePath};
use crate::schema::Value;

use super::params::*;
use super::{ApiError, ClickEvent, Core, Result, Scope, SubTarget, Subscription};
use super::ClickSub;

/// Adds and looks up scene nodes, either shared or for one client.
#[derive(Clone)]
pub struct SceneApi {
    core: Arc<Core>,
    scope: Scope,
}

impl SceneApi {
    pub(crate) fn new(core: Arc<Core>, scope: Scope) -> Self {
        Self { core, scope }
    }

    pub fn scope(&self) -> Scope {
        self.scope
    }

    /// Creates or replaces the node at `path`.
    pub fn add(&self, path: &str, params: impl NodeParams) -> Result<NodeHandle> {
        self.add_node(path, params.into_node())
    }

    pub fn add_node(&self, path: &str, node: SceneNode) -> Result<NodeHandle> {
        let path = ScenePath::parse(path)?;
        self.core.hub.lock().upsert_node(self.scope, &path, node)?;
        Ok(NodeHandle::new(self.core.clone(), self.scope, path))
    }

    pub fn add_frame(&self, path: &str, params: FrameParams) -> Result<NodeHandle> {
        self.add(path, params)
    }

    pub fn add_grid(&self, path: &str, params: GridParams) -> Result<NodeHandle> {
        self.add(path, params)
    }

    pub fn add_point_cloud(&self, path: &str, params: PointCloudParams) -> Result<NodeHandle> {
        self.add(path, params)
    }

    pub fn add_line_segments(&self, path: &str, params: LineSegmentsParams) -> Result<NodeHandle> {
        self.add(path, params)
    }

    pub fn add_mesh(&self, path: &str, params: MeshParams) -> Result<NodeHandle> {
        self.add(path, params)
    }

    pub fn add_box(&self, path: &str, params: BoxParams) -> Result<NodeHandle> {
        self.add(path, params)
    }

    pub fn add_icosphere(&self, path: &str, params: IcosphereParams) -> Result<NodeHandle> {
        self.add(path, params)
    }

    pub fn add_camera_frustum(&self, path: &str, params: CameraFrustumParams) -> Result<NodeHandle> {
        self.add(path, params)
    }

    pub fn add_label(&self, path: &str, params: LabelParams) -> Result<NodeHandle> {
        self.add(path, params)
    }

    pub fn add_image(&self, path: &str, params: ImageParams) -> Result<NodeHandle> {
        self.add(path, params)
    }

    /// Handle to an existing node.
    pub fn get(&self, path: &str) -> Result<Option<NodeHandle>> {
        let path = ScenePath::parse(path)?;
        let exists = self.core.hub.lock().scene(self.scope)?.contains(&path);
        Ok(exists.then(|| NodeHandle::new(self.core.clone(), self.scope, path)))
    }

    /// Removes a node and its subtree.
    pub fn remove(&self, path: &str) -> Result<()> {
        let path = ScenePath::parse(path)?;
        self.core.hub.lock().remove_node(self.scope, &path)?;
        Ok(())
    }

    /// Paths of every node, root included, in path order.
    pub fn paths(&self) -> Result<Vec<ScenePath>> {
        Ok(self
            .core
            .hub
            .lock()
            .scene(self.scope)?
            .iter()
            .map(|(p, _)| p.clone())
            .collect())
    }
}

/// A path-addressed reference to one scene node.
///
/// Reads come from server state and never touch the network. Once the node
/// is gone every call fails with [`ApiError::UseAfterRemove`].
#[derive(Clone)]
pub struct NodeHandle {
    core: Arc<Core>,
    scope: Scope,
    path: ScenePath,
}

impl std::fmt::Debug for NodeHandle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NodeHandle")
            .field("scope", &self.scope)
            .field("path", &self.path)
            .finish()
    }
}

impl NodeHandle {
    fn new(core: Arc<Core>, scope: Scope, path: ScenePath) -> Self {
        Self { core, scope, path }
    }

    pub fn path(&self) -> &ScenePath {
        &self.path
    }

    pub fn scope(&self) -> Scope {
        self.scope
    }

    fn gone(&self) -> ApiError {
        ApiError::UseAfterRemove(self.path.to_string())
    }

    fn read<R>(&self, f: impl FnOnce(&SceneNode) -> R) -> Result<R> {
        let hub = self.core.hub.lock();
        let scene = hub.scene(self.scope)?;
        scene.get(&self.path).map(f).ok_or_else(|| self.gone())
    }

    fn write(&self, f: impl FnOnce(&mut crate::transport::Hub) -> Result<(), crate::transport::TransportError>) -> Result<()> {
        let mut hub = self.core.hub.lock();
        if !hub.scene(self.scope)?.contains(&self.path) {
            return Err(self.gone());
        }
        Ok(f(&mut hub)?)
    }

    pub fn is_live(&self) -> bool {
        self.read(|_| ()).is_ok()
    }

    /// A copy of the node's current state.
    pub fn node(&self) -> Result<SceneNode> {
        self.read(SceneNode::clone)
    }

    pub fn kind(&self) -> Result<NodeKind> {
        self.read(|n| n.kind)
    }

    pub fn prop(&self, name: &str) -> Result<Option<Value>> {
        self.read(|n| n.prop(name).cloned())
    }

    pub fn pose(&self) -> Result<Pose> {
        self.read(|n| n.pose)
    }

    pub fn visible(&self) -> Result<bool> {
        self.read(|n| n.visible)
    }

    pub fn clickable(&self) -> Result<bool> {
        self.read(|n| n.clickable)
    }

    pub fn world_transform(&self) -> Result<Pose> {
        let hub = self.core.hub.lock();
        hub.scene(self.scope)?
            .world_transform(&self.path)
            .map_err(|_| self.gone())
    }

    pub fn set_prop(&self, name: &str, value: impl Into<Value>) -> Result<()> {
        let value = value.into();
        self.write(|hub| hub.set_node_prop(self.scope, &self.path, name, value))
    }

    pub fn set_color(&self, rgb: [u8; 3]) -> Result<()> {
        self.set_prop("color", rgb)
    }

    pub fn set_pose(&self, pose: Pose) -> Result<()> {
        self.write(|hub| hub.set_pose(self.scope, &self.path, pose))
    }

    pub fn set_position(&self, position: [f64; 3]) -> Result<()> {
        let pose = self.pose()?.with_position(position)?;
        self.set_pose(pose)
    }

    pub fn set_wxyz(&self, wxyz: [f64; 4]) -> Result<()> {
        let pose = self.pose()?.with_wxyz(wxyz)?;
        self.set_pose(pose)
    }

    pub fn set_visible(&self, visible: bool) -> Result<()> {
        self.write(|hub| hub.set_visible(self.scope, &self.path, visible))
    }

    pub fn set_clickable(&self, clickable: bool) -> Result<()> {
        self.write(|hub| hub.set_clickable(self.scope, &self.path, clickable))
    }

    /// Registers a click callback and makes the node clickable.
    pub fn on_click(&self, callback: impl Fn(&ClickEvent) + Send + Sync + 'static) -> Result<Subscription> {
        if !self.clickable()? {
            self.set_clickable(true)?;
        }
        let id = self.core.next_sub();
        self.core.callbacks.lock().click.push(ClickSub {
            id,
            scope: self.scope,
            path: self.path.clone(),
            callback: Arc::new(callback),
        });
        Ok(self.core.subscription(SubTarget::Click(id)))
    }

    /// Removes the node and its subtree.
    pub fn remove(&self) -> Result<()> {
        self.write(|hub| hub.remove_node(self.scope, &self.path).map(|_| ()))
    }

    /// The message that would recreate this node as it is now.
    pub fn to_wire(&self) -> Result<Wire> {
        self.read(|n| Wire::SceneAdd {
            path: self.path.clone(),
            node: n.clone(),
        })
    }
}
