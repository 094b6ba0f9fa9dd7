//! Unsupervised estimators shared by the lane detectors.

mod dbscan;
mod kmeans;
mod linefit;

pub use dbscan::dbscan;
pub use kmeans::{kmeans_1d, kmeans_2d, sse_1d, DEFAULT_MAX_ITER};
pub use linefit::{fit_least_squares, LineFit};

use crate::error::{LaneError, Result};

/// Real-valued planar point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(&self, other: &Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Per-point cluster assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    Cluster(usize),
    Noise,
}

impl Label {
    pub fn is_noise(&self) -> bool {
        matches!(self, Label::Noise)
    }

    pub fn cluster(&self) -> Option<usize> {
        match self {
            Label::Cluster(id) => Some(*id),
            Label::Noise => None,
        }
    }
}

/// Clustering output; `C` is `f64` for 1-D data and [`Point2`] for 2-D.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterResult<C> {
    pub labels: Vec<Label>,
    pub centroids: Vec<C>,
    /// Set when fewer clusters than requested could be formed (k exceeded
    /// the number of distinct points).
    pub reduced_k: bool,
}

impl<C> ClusterResult<C> {
    pub fn cluster_count(&self) -> usize {
        self.centroids.len()
    }
}

pub(crate) fn ensure_finite(points: &[Point2]) -> Result<()> {
    if points.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
        return Err(LaneError::Parameter(
            "points must have finite coordinates".into(),
        ));
    }
    Ok(())
}
