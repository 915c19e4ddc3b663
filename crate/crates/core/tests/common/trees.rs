//! Random scene trees and the independent oracles they are checked against:
//! 4x4 homogeneous matrix chains for transforms and an ancestor walk for
//! visibility.

use std::collections::HashMap;

use nalgebra::{Matrix4, Quaternion, Translation3, UnitQuaternion};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{label, path};
use scenecast::scene::{Pose, SceneGraph};

/// One randomly generated tree: node path -> (local pose, own visibility).
pub struct RandomTree {
    pub nodes: Vec<(String, [f64; 4], [f64; 3], bool)>,
}

pub fn random_unit_quaternion(rng: &mut ChaCha8Rng) -> [f64; 4] {
    loop {
        let q: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
        let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 0.1 && n <= 1.0 {
            return q.map(|x| x / n);
        }
    }
}

pub fn random_tree(rng: &mut ChaCha8Rng, max_depth: usize) -> RandomTree {
    let mut paths: Vec<String> = Vec::new();
    let count = rng.random_range(1..40);
    for i in 0..count {
        let parent = if paths.is_empty() || rng.random_bool(0.2) {
            String::new()
        } else {
            paths[rng.random_range(0..paths.len())].clone()
        };
        if parent.matches('/').count() >= max_depth {
            continue;
        }
        paths.push(format!("{parent}/n{i}"));
    }
    let nodes = paths
        .into_iter()
        .map(|p| {
            let q = random_unit_quaternion(rng);
            let t = [rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)];
            (p, q, t, rng.random_bool(0.7))
        })
        .collect();
    RandomTree { nodes }
}

pub fn build(tree: &RandomTree) -> SceneGraph {
    let mut g = SceneGraph::new();
    for (p, q, t, visible) in &tree.nodes {
        let node = label(p).with_pose(Pose::new(*q, *t).unwrap()).with_visible(*visible);
        g.upsert_node(&path(p), node).unwrap();
    }
    g
}

pub fn homogeneous(q: [f64; 4], t: [f64; 3]) -> Matrix4<f64> {
    let rot = UnitQuaternion::from_quaternion(Quaternion::new(q[0], q[1], q[2], q[3]));
    Translation3::new(t[0], t[1], t[2]).to_homogeneous() * rot.to_homogeneous()
}

/// Prefixes of a path string, shortest first, excluding the root.
pub fn prefixes(p: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut acc = String::new();
    for seg in p.split('/').filter(|s| !s.is_empty()) {
        acc.push('/');
        acc.push_str(seg);
        out.push(acc.clone());
    }
    out
}

pub fn oracle_world(tree: &RandomTree, p: &str) -> Matrix4<f64> {
    let locals: HashMap<&str, Matrix4<f64>> = tree
        .nodes
        .iter()
        .map(|(p, q, t, _)| (p.as_str(), homogeneous(*q, *t)))
        .collect();
    prefixes(p).iter().fold(Matrix4::identity(), |acc, pre| {
        acc * locals.get(pre.as_str()).copied().unwrap_or_else(Matrix4::identity)
    })
}

pub fn oracle_visible(tree: &RandomTree, p: &str) -> bool {
    let own: HashMap<&str, bool> = tree.nodes.iter().map(|(p, _, _, v)| (p.as_str(), *v)).collect();
    prefixes(p).iter().all(|pre| own.get(pre.as_str()).copied().unwrap_or(true))
}

pub fn assert_transforms_match(tree: &RandomTree) {
    let g = build(tree);
    for (p, ..) in &tree.nodes {
        let world = g.world_transform(&path(p)).unwrap();
        let ours = homogeneous(world.wxyz(), world.position());
        let expected = oracle_world(tree, p);
        let err = (ours - expected).abs().max();
        assert!(err < 1e-6, "{p}: max abs error {err}");
    }
}

