//! Radius-limited neighbor search over a fixed point set.
//!
//! Two interchangeable backends: a brute-force scan (the reference) and an
//! axis-aligned kd-tree. Queries return the closed ball {i : ‖X_i − x‖ ≤ r}
//! with distances recomputed exactly from the coordinates, never inferred
//! from tree bounds, so both backends return the identical (index, distance)
//! multiset. Indices always refer to the caller's original point order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SpatialError {
    #[error("empty point set")]
    Empty,
    #[error("query dimension {got} does not match index dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("radius must be positive and finite")]
    BadRadius,
    #[error("unknown index kind {0:?} (expected kdtree or brute)")]
    UnknownKind(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexKind {
    Brute,
    KdTree,
}

impl fmt::Display for IndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IndexKind::Brute => "brute",
            IndexKind::KdTree => "kdtree",
        })
    }
}

impl FromStr for IndexKind {
    type Err = SpatialError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "brute" => Ok(IndexKind::Brute),
            "kdtree" => Ok(IndexKind::KdTree),
            other => Err(SpatialError::UnknownKind(other.to_string())),
        }
    }
}

pub const DEFAULT_LEAF_SIZE: usize = 16;

#[derive(Debug)]
enum Node {
    Leaf {
        start: usize,
        end: usize,
    },
    Split {
        axis: usize,
        value: f64,
        left: usize,
        right: usize,
    },
}

/// Immutable spatial index; concurrent queries from many threads are safe.
#[derive(Debug)]
pub struct SpatialIndex {
    points: Vec<f64>,
    dim: usize,
    backend: Backend,
}

#[derive(Debug)]
enum Backend {
    Brute,
    KdTree {
        // permutation of original indices, partitioned by the tree
        order: Vec<u32>,
        nodes: Vec<Node>,
        root: usize,
    },
}

impl SpatialIndex {
    /// Builds an index over `n` points given row-major coordinates.
    pub fn build(
        points: &[f64],
        dim: usize,
        kind: IndexKind,
        leaf_size: usize,
    ) -> Result<Self, SpatialError> {
        assert!(leaf_size >= 1, "leaf size must be at least 1");
        if dim == 0 || points.is_empty() {
            return Err(SpatialError::Empty);
        }
        debug_assert_eq!(points.len() % dim, 0);
        let backend = match kind {
            IndexKind::Brute => Backend::Brute,
            IndexKind::KdTree => {
                let n = points.len() / dim;
                let mut order: Vec<u32> = (0..n as u32).collect();
                let mut nodes = Vec::new();
                let root = build_subtree(points, dim, &mut order, 0, n, leaf_size, &mut nodes);
                Backend::KdTree { order, nodes, root }
            }
        };
        Ok(SpatialIndex {
            points: points.to_vec(),
            dim,
            backend,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// All points within the closed ball of radius `r` around `x`, as
    /// (original index, exact distance) pairs in ascending index order.
    pub fn radius_query(&self, x: &[f64], r: f64) -> Result<Vec<(usize, f64)>, SpatialError> {
        if x.len() != self.dim {
            return Err(SpatialError::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        if !(r > 0.0) || !r.is_finite() {
            return Err(SpatialError::BadRadius);
        }
        let mut out = Vec::new();
        let r_sq = r * r;
        match &self.backend {
            Backend::Brute => {
                for i in 0..self.len() {
                    if let Some(d) = self.distance_within(i, x, r_sq) {
                        out.push((i, d));
                    }
                }
            }
            Backend::KdTree { order, nodes, root } => {
                self.query_subtree(order, nodes, *root, x, r, r_sq, &mut out);
                out.sort_unstable_by_key(|&(i, _)| i);
            }
        }
        Ok(out)
    }

    /// Squared-distance accumulation with early exit once the partial sum
    /// exceeds r²; remaining terms are non-negative so the rejection is exact.
    /// The membership decision compares squared values; accepted points report
    /// the recomputed Euclidean distance.
    fn distance_within(&self, i: usize, x: &[f64], r_sq: f64) -> Option<f64> {
        let p = &self.points[i * self.dim..(i + 1) * self.dim];
        let mut sum = 0.0;
        for (a, b) in p.iter().zip(x) {
            let d = a - b;
            sum += d * d;
            if sum > r_sq {
                return None;
            }
        }
        Some(sum.sqrt())
    }

    #[allow(clippy::too_many_arguments)]
    fn query_subtree(
        &self,
        order: &[u32],
        nodes: &[Node],
        node: usize,
        x: &[f64],
        r: f64,
        r_sq: f64,
        out: &mut Vec<(usize, f64)>,
    ) {
        match &nodes[node] {
            Node::Leaf { start, end } => {
                for &idx in &order[*start..*end] {
                    if let Some(d) = self.distance_within(idx as usize, x, r_sq) {
                        out.push((idx as usize, d));
                    }
                }
            }
            Node::Split {
                axis,
                value,
                left,
                right,
            } => {
                let delta = x[*axis] - value;
                if delta <= r {
                    self.query_subtree(order, nodes, *left, x, r, r_sq, out);
                }
                if -delta <= r {
                    self.query_subtree(order, nodes, *right, x, r, r_sq, out);
                }
            }
        }
    }
}

/// Recursively partitions order[start..end]; splits on the widest-spread axis
/// at the median. Returns the node id.
fn build_subtree(
    points: &[f64],
    dim: usize,
    order: &mut [u32],
    start: usize,
    end: usize,
    leaf_size: usize,
    nodes: &mut Vec<Node>,
) -> usize {
    let count = end - start;
    if count <= leaf_size {
        nodes.push(Node::Leaf { start, end });
        return nodes.len() - 1;
    }
    // widest-spread axis over this slice
    let mut axis = 0;
    let mut best_spread = -1.0;
    for a in 0..dim {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for &idx in &order[start..end] {
            let v = points[idx as usize * dim + a];
            lo = lo.min(v);
            hi = hi.max(v);
        }
        let spread = hi - lo;
        if spread > best_spread {
            best_spread = spread;
            axis = a;
        }
    }
    if best_spread <= 0.0 {
        // all points coincide on every axis; a leaf avoids infinite recursion
        nodes.push(Node::Leaf { start, end });
        return nodes.len() - 1;
    }
    let mid = start + count / 2;
    let slice = &mut order[start..end];
    slice.select_nth_unstable_by(count / 2, |&a, &b| {
        let va = points[a as usize * dim + axis];
        let vb = points[b as usize * dim + axis];
        va.partial_cmp(&vb).unwrap().then(a.cmp(&b))
    });
    let split_value = points[order[mid] as usize * dim + axis];
    let node_id = nodes.len();
    nodes.push(Node::Leaf { start: 0, end: 0 }); // placeholder
    let left = build_subtree(points, dim, order, start, mid, leaf_size, nodes);
    let right = build_subtree(points, dim, order, mid, end, leaf_size, nodes);
    nodes[node_id] = Node::Split {
        axis,
        value: split_value,
        left,
        right,
    };
    node_id
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use rand::Rng;

    fn random_points(n: usize, dim: usize, name: &str) -> Vec<f64> {
        let mut rng = substream(99, name);
        (0..n * dim).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect()
    }

    #[test]
    fn boundary_ties_are_included() {
        let points = [0.0, 1.0, 2.0];
        let idx = SpatialIndex::build(&points, 1, IndexKind::KdTree, 1).unwrap();
        let hits = idx.radius_query(&[0.0], 1.0).unwrap();
        assert_eq!(hits, vec![(0, 0.0), (1, 1.0)]);
        let brute = SpatialIndex::build(&points, 1, IndexKind::Brute, 1).unwrap();
        assert_eq!(brute.radius_query(&[0.0], 1.0).unwrap(), hits);
    }

    #[test]
    fn small_radius_gives_empty_result() {
        let points = [0.0, 1.0, 2.0];
        let idx = SpatialIndex::build(&points, 1, IndexKind::KdTree, 2).unwrap();
        assert!(idx.radius_query(&[10.0], 0.5).unwrap().is_empty());
    }

    #[test]
    fn single_point_and_collinear_build() {
        let idx = SpatialIndex::build(&[1.0, 2.0], 2, IndexKind::KdTree, 1).unwrap();
        assert_eq!(idx.len(), 1);
        let collinear = [0.0, 0.0, 1.0, 1.0, 2.0, 2.0];
        let idx = SpatialIndex::build(&collinear, 2, IndexKind::KdTree, 1).unwrap();
        let hits = idx.radius_query(&[1.0, 1.0], 0.1).unwrap();
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].0, 1);
    }

    #[test]
    fn duplicate_points_handled() {
        let points = vec![0.5; 20]; // 10 identical 2-D points
        let idx = SpatialIndex::build(&points, 2, IndexKind::KdTree, 2).unwrap();
        let hits = idx.radius_query(&[0.5, 0.5], 0.1).unwrap();
        assert_eq!(hits.len(), 10);
        assert!(hits.iter().all(|&(_, d)| d == 0.0));
    }

    #[test]
    fn rejects_empty_and_mismatch_and_bad_radius() {
        assert_eq!(
            SpatialIndex::build(&[], 2, IndexKind::Brute, 1).unwrap_err(),
            SpatialError::Empty
        );
        let idx = SpatialIndex::build(&[0.0, 0.0], 2, IndexKind::Brute, 1).unwrap();
        assert!(matches!(
            idx.radius_query(&[0.0], 1.0).unwrap_err(),
            SpatialError::DimensionMismatch { expected: 2, got: 1 }
        ));
        assert_eq!(idx.radius_query(&[0.0, 0.0], 0.0).unwrap_err(), SpatialError::BadRadius);
        assert_eq!(
            idx.radius_query(&[0.0, 0.0], f64::INFINITY).unwrap_err(),
            SpatialError::BadRadius
        );
    }

    #[test]
    fn exhaustive_equivalence_grid() {
        // spec grid: (n, D) in {1,10,100} x {1,2,5,20}, 50 random (x, r) each
        for &n in &[1usize, 10, 100] {
            for &dim in &[1usize, 2, 5, 20] {
                let pts = random_points(n, dim, &format!("eq:{n}:{dim}"));
                let kd = SpatialIndex::build(&pts, dim, IndexKind::KdTree, 4).unwrap();
                let brute = SpatialIndex::build(&pts, dim, IndexKind::Brute, 4).unwrap();
                let mut rng = substream(99, &format!("eq-q:{n}:{dim}"));
                for _ in 0..50 {
                    let x: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
                    let r = rng.random::<f64>() * 1.5 + 1e-3;
                    let a = kd.radius_query(&x, r).unwrap();
                    let b = brute.radius_query(&x, r).unwrap();
                    assert_eq!(a, b, "n={n} dim={dim} r={r}");
                }
            }
        }
    }

    #[test]
    fn uniform_cube_equivalence() {
        // 1000 uniform points in [0,1]^3, 100 random queries at r = 0.2
        let mut rng = substream(7, "cube");
        let pts: Vec<f64> = (0..3000).map(|_| rng.random::<f64>()).collect();
        let kd = SpatialIndex::build(&pts, 3, IndexKind::KdTree, DEFAULT_LEAF_SIZE).unwrap();
        let brute = SpatialIndex::build(&pts, 3, IndexKind::Brute, DEFAULT_LEAF_SIZE).unwrap();
        for _ in 0..100 {
            let x: Vec<f64> = (0..3).map(|_| rng.random::<f64>()).collect();
            let a = kd.radius_query(&x, 0.2).unwrap();
            let b = brute.radius_query(&x, 0.2).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn monotone_in_radius() {
        let pts = random_points(200, 3, "mono");
        let idx = SpatialIndex::build(&pts, 3, IndexKind::KdTree, 8).unwrap();
        let mut rng = substream(99, "mono-q");
        for _ in 0..20 {
            let x: Vec<f64> = (0..3).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
            let small: std::collections::HashSet<usize> = idx
                .radius_query(&x, 0.3)
                .unwrap()
                .into_iter()
                .map(|(i, _)| i)
                .collect();
            let large: std::collections::HashSet<usize> = idx
                .radius_query(&x, 0.9)
                .unwrap()
                .into_iter()
                .map(|(i, _)| i)
                .collect();
            assert!(small.is_subset(&large));
        }
    }

    #[test]
    fn distances_exact_within_1e15() {
        let pts = random_points(300, 4, "exact");
        let idx = SpatialIndex::build(&pts, 4, IndexKind::KdTree, 8).unwrap();
        let mut rng = substream(99, "exact-q");
        let x: Vec<f64> = (0..4).map(|_| rng.random::<f64>()).collect();
        for (i, d) in idx.radius_query(&x, 1.5).unwrap() {
            let direct: f64 = pts[i * 4..(i + 1) * 4]
                .iter()
                .zip(&x)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            assert!((d - direct).abs() <= 1e-15);
        }
    }

    #[test]
    fn gaussian_cloud_r10_matches_brute() {
        use rand_distr::{Distribution, StandardNormal};
        let mut rng = substream(3, "gauss10");
        let n = 10_000usize;
        let dim = 10usize;
        let pts: Vec<f64> = (0..n * dim)
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        let kd = SpatialIndex::build(&pts, dim, IndexKind::KdTree, DEFAULT_LEAF_SIZE).unwrap();
        let brute = SpatialIndex::build(&pts, dim, IndexKind::Brute, DEFAULT_LEAF_SIZE).unwrap();
        for q in 0..10 {
            let x: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
            let a = kd.radius_query(&x, 1.0).unwrap();
            let b = brute.radius_query(&x, 1.0).unwrap();
            assert_eq!(a, b, "query {q}");
        }
    }
}
