//! Points, Euclidean distance and radius-graph adjacency.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::matpower::BinaryMatrix;

/// Node identifier, stable across trajectory frames.
pub type NodeId = u64;

#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    id: NodeId,
    coords: Vec<f64>,
}

impl Point {
    pub fn new(id: NodeId, coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::invalid(format!("point {id} has no coordinates")));
        }
        if let Some(c) = coords.iter().find(|c| !c.is_finite()) {
            return Err(Error::invalid(format!(
                "point {id} has non-finite coordinate {c}"
            )));
        }
        Ok(Point { id, coords })
    }

    pub fn id(&self) -> NodeId {
        self.id
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }
}

/// Ordered, non-empty set of points sharing one dimension. The order is the
/// node index order used by every downstream matrix and label vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<Point>,
    dimension: usize,
}

impl PointSet {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        let first = points
            .first()
            .ok_or_else(|| Error::invalid("point set is empty"))?;
        let dimension = first.dimension();
        let mut seen = HashSet::with_capacity(points.len());
        for p in &points {
            if p.dimension() != dimension {
                return Err(Error::DimensionMismatch {
                    left: dimension,
                    right: p.dimension(),
                });
            }
            if !seen.insert(p.id) {
                return Err(Error::invalid(format!("duplicate id {}", p.id)));
            }
        }
        Ok(PointSet { points, dimension })
    }

    /// Convenience constructor assigning ids `0..n` in order.
    pub fn from_coords<I>(coords: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<f64>>,
    {
        let points = coords
            .into_iter()
            .enumerate()
            .map(|(i, c)| Point::new(i as NodeId, c))
            .collect::<Result<Vec<_>>>()?;
        PointSet::new(points)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always false; kept for the `len`/`is_empty` pairing.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.points.iter().map(Point::id)
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusteringConfig {
    radius: f64,
}

impl ClusteringConfig {
    pub fn new(radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::invalid(format!(
                "radius must be positive and finite, got {radius}"
            )));
        }
        Ok(ClusteringConfig { radius })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

pub fn euclidean_distance(a: &Point, b: &Point) -> Result<f64> {
    if a.dimension() != b.dimension() {
        return Err(Error::DimensionMismatch {
            left: a.dimension(),
            right: b.dimension(),
        });
    }
    Ok(distance_unchecked(&a.coords, &b.coords))
}

fn distance_unchecked(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Radius-graph adjacency: entry `(i, j)` is set iff `dist(p_i, p_j) < r`.
///
/// The comparison is strict and has no tolerance band. Every diagonal entry is
/// set since a point is at distance zero from itself.
pub fn build_adjacency(ps: &PointSet, cfg: &ClusteringConfig) -> BinaryMatrix {
    let n = ps.len();
    let r = cfg.radius();
    let mut a = BinaryMatrix::zeros(n);
    for i in 0..n {
        a.set(i, i, true);
        let pi = ps.points[i].coords();
        for j in (i + 1)..n {
            if distance_unchecked(pi, ps.points[j].coords()) < r {
                a.set(i, j, true);
                a.set(j, i, true);
            }
        }
    }
    a
}
