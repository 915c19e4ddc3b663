//! Path-addressed scene graph.
//!
//! A pure state machine: nodes keyed by [`ScenePath`], each with a kind, a
//! property map, a local [`Pose`] and visibility flags. Every non-root node's
//! parent is present; missing ancestors are created as placeholders.

mod kind;
mod path;
mod pose;

use std::collections::BTreeMap;
use std::ops::Bound;

use thiserror::Error;

pub use kind::{pack_faces, NodeKind};
pub use path::{path_is_within, PathError, ScenePath};
pub use pose::{quat_mul, rotate, Pose, PoseError, MIN_QUATERNION_NORM};

use crate::props;
use crate::schema::{Props, Value};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SceneError {
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Pose(#[from] PoseError),
    #[error("no node at {0}")]
    UnknownPath(ScenePath),
    #[error("the root node cannot be modified or removed")]
    RootImmutable,
    #[error("invalid {kind} properties: {reason}")]
    InvalidProps { kind: NodeKind, reason: String },
    #[error("{kind} has no property {prop:?}")]
    UnknownProp { kind: NodeKind, prop: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneNode {
    pub kind: NodeKind,
    pub props: Props,
    pub pose: Pose,
    pub visible: bool,
    pub clickable: bool,
}

impl SceneNode {
    pub fn new(kind: NodeKind, props: Props) -> Self {
        Self {
            kind,
            props,
            pose: Pose::IDENTITY,
            visible: true,
            clickable: false,
        }
    }

    pub fn placeholder() -> Self {
        Self::new(NodeKind::Placeholder, Props::new())
    }

    pub fn with_pose(mut self, pose: Pose) -> Self {
        self.pose = pose;
        self
    }

    pub fn with_visible(mut self, visible: bool) -> Self {
        self.visible = visible;
        self
    }

    pub fn with_clickable(mut self, clickable: bool) -> Self {
        self.clickable = clickable;
        self
    }

    pub fn prop(&self, name: &str) -> Option<&Value> {
        self.props.get(name)
    }

    pub fn validate(&self) -> Result<(), SceneError> {
        self.kind
            .validate_props(&self.props)
            .map_err(|reason| SceneError::InvalidProps {
                kind: self.kind,
                reason,
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneGraph {
    nodes: BTreeMap<ScenePath, SceneNode>,
}

impl Default for SceneGraph {
    fn default() -> Self {
        Self::new()
    }
}

impl SceneGraph {
    pub fn new() -> Self {
        let mut nodes = BTreeMap::new();
        nodes.insert(ScenePath::root(), SceneNode::placeholder());
        Self { nodes }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// True when only the root is present.
    pub fn is_empty(&self) -> bool {
        self.nodes.len() == 1
    }

    pub fn get(&self, path: &ScenePath) -> Option<&SceneNode> {
        self.nodes.get(path)
    }

    pub fn contains(&self, path: &ScenePath) -> bool {
        self.nodes.contains_key(path)
    }

    /// All nodes in path order (parents before children).
    pub fn iter(&self) -> impl Iterator<Item = (&ScenePath, &SceneNode)> {
        self.nodes.iter()
    }

    /// Direct children in lexicographic order.
    pub fn children<'a>(&'a self, path: &'a ScenePath) -> impl Iterator<Item = &'a ScenePath> + 'a {
        self.subtree_keys(path)
            .filter(move |p| p.parent().as_ref() == Some(path))
    }

    /// `path` and every descendant, in path order.
    fn subtree_keys<'a>(&'a self, path: &'a ScenePath) -> impl Iterator<Item = &'a ScenePath> + 'a {
        self.nodes
            .range((Bound::Included(path), Bound::Unbounded))
            .map(|(p, _)| p)
            .take_while(move |p| p.is_within(path))
    }

    fn node_mut(&mut self, path: &ScenePath) -> Result<&mut SceneNode, SceneError> {
        if path.is_root() {
            return Err(SceneError::RootImmutable);
        }
        self.nodes
            .get_mut(path)
            .ok_or_else(|| SceneError::UnknownPath(path.clone()))
    }

    /// Inserts or replaces the node at `path`. Missing ancestors become
    /// placeholders; an existing node keeps its children.
    pub fn upsert_node(&mut self, path: &ScenePath, node: SceneNode) -> Result<(), SceneError> {
        if path.is_root() {
            return Err(SceneError::RootImmutable);
        }
        node.validate()?;
        for ancestor in path.lineage() {
            if &ancestor == path {
                break;
            }
            self.nodes
                .entry(ancestor)
                .or_insert_with(SceneNode::placeholder);
        }
        self.nodes.insert(path.clone(), node);
        Ok(())
    }

    /// Sets one kind property, validating the resulting node as a whole.
    pub fn set_node_prop(&mut self, path: &ScenePath, name: &str, value: Value) -> Result<(), SceneError> {
        let node = self.node_mut(path)?;
        let mut props = node.props.clone();
        props.insert(name.to_owned(), value);
        let kind = node.kind;
        if props::find(&kind.prop_specs(), name).is_none() {
            return Err(SceneError::UnknownProp {
                kind,
                prop: name.to_owned(),
            });
        }
        kind.validate_props(&props)
            .map_err(|reason| SceneError::InvalidProps { kind, reason })?;
        node.props = props;
        Ok(())
    }

    /// Sets one kind property checking only that property's own type and
    /// range.
    ///
    /// Mirrors use this to apply deduplicated update streams, where updates
    /// to sibling properties may arrive in a different order than they were
    /// made. The server validated the final combination.
    pub fn set_node_prop_trusted(&mut self, path: &ScenePath, name: &str, value: Value) -> Result<(), SceneError> {
        let node = self.node_mut(path)?;
        let kind = node.kind;
        let specs = kind.prop_specs();
        let spec = props::find(&specs, name).ok_or_else(|| SceneError::UnknownProp {
            kind,
            prop: name.to_owned(),
        })?;
        spec.validate(&value)
            .map_err(|reason| SceneError::InvalidProps { kind, reason })?;
        node.props.insert(name.to_owned(), value);
        Ok(())
    }

    pub fn set_pose(&mut self, path: &ScenePath, pose: Pose) -> Result<(), SceneError> {
        self.node_mut(path)?.pose = pose;
        Ok(())
    }

    pub fn set_visible(&mut self, path: &ScenePath, visible: bool) -> Result<(), SceneError> {
        self.node_mut(path)?.visible = visible;
        Ok(())
    }

    pub fn set_clickable(&mut self, path: &ScenePath, clickable: bool) -> Result<(), SceneError> {
        self.node_mut(path)?.clickable = clickable;
        Ok(())
    }

    /// Removes `path` and its subtree, returning the removed paths.
    pub fn remove_node(&mut self, path: &ScenePath) -> Result<Vec<ScenePath>, SceneError> {
        if path.is_root() {
            return Err(SceneError::RootImmutable);
        }
        if !self.nodes.contains_key(path) {
            return Err(SceneError::UnknownPath(path.clone()));
        }
        let doomed: Vec<ScenePath> = self.subtree_keys(path).cloned().collect();
        for p in &doomed {
            self.nodes.remove(p);
        }
        Ok(doomed)
    }

    /// Composition of local poses from the root down to `path`.
    pub fn world_transform(&self, path: &ScenePath) -> Result<Pose, SceneError> {
        if !self.contains(path) {
            return Err(SceneError::UnknownPath(path.clone()));
        }
        Ok(path
            .lineage()
            .iter()
            .filter_map(|p| self.nodes.get(p))
            .fold(Pose::IDENTITY, |world, node| world.compose(&node.pose)))
    }

    /// Logical AND of `visible` from the root down to `path`.
    pub fn effective_visibility(&self, path: &ScenePath) -> Result<bool, SceneError> {
        if !self.contains(path) {
            return Err(SceneError::UnknownPath(path.clone()));
        }
        Ok(path
            .lineage()
            .iter()
            .all(|p| self.nodes.get(p).is_some_and(|n| n.visible)))
    }
}
