//! Lloyd's algorithm for 1-D and 2-D point sets.
//!
//! Callers supply the centroid seeds, so frame-to-frame tracking can reuse
//! the previous frame's centroids. Distance ties assign to the lower
//! centroid index; iteration stops when assignments stop changing or after
//! `max_iter` rounds.

use crate::error::{LaneError, Result};
use crate::estimation::{ensure_finite, ClusterResult, Label, Point2};

pub const DEFAULT_MAX_ITER: usize = 50;

pub fn kmeans_1d(
    values: &[f64],
    k: usize,
    init: &[f64],
    max_iter: usize,
) -> Result<ClusterResult<f64>> {
    if values.is_empty() {
        return Err(LaneError::EmptyInput("kmeans on empty point set".into()));
    }
    if k == 0 {
        return Err(LaneError::Parameter("kmeans requires k >= 1".into()));
    }
    if init.len() != k {
        return Err(LaneError::Parameter(format!(
            "kmeans needs {k} seeds, got {}",
            init.len()
        )));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(LaneError::Parameter("values must be finite".into()));
    }

    // Collapse duplicates to find the number of distinct points; if k
    // exceeds it, run with the reduced k and flag the result.
    let mut distinct = values.to_vec();
    distinct.sort_by(|a, b| a.partial_cmp(b).unwrap());
    distinct.dedup();
    let (k, reduced_k, mut centroids) = if distinct.len() < k {
        (distinct.len(), true, distinct)
    } else {
        (k, false, init.to_vec())
    };

    let mut labels = vec![0usize; values.len()];
    for _ in 0..max_iter.max(1) {
        let mut changed = false;
        for (i, &v) in values.iter().enumerate() {
            let mut best = 0usize;
            let mut best_d = f64::INFINITY;
            for (c, &cv) in centroids.iter().enumerate() {
                let d = (v - cv).abs();
                if d < best_d {
                    best_d = d;
                    best = c;
                }
            }
            if labels[i] != best {
                labels[i] = best;
                changed = true;
            }
        }
        // Mean update; empty clusters keep their previous centroid.
        let mut sums = vec![0.0f64; k];
        let mut counts = vec![0usize; k];
        for (i, &v) in values.iter().enumerate() {
            sums[labels[i]] += v;
            counts[labels[i]] += 1;
        }
        for c in 0..k {
            if counts[c] > 0 {
                centroids[c] = sums[c] / counts[c] as f64;
            }
        }
        if !changed {
            break;
        }
    }

    Ok(ClusterResult {
        labels: labels.into_iter().map(Label::Cluster).collect(),
        centroids,
        reduced_k,
    })
}

pub fn kmeans_2d(
    points: &[Point2],
    k: usize,
    init: &[Point2],
    max_iter: usize,
) -> Result<ClusterResult<Point2>> {
    if points.is_empty() {
        return Err(LaneError::EmptyInput("kmeans on empty point set".into()));
    }
    if k == 0 {
        return Err(LaneError::Parameter("kmeans requires k >= 1".into()));
    }
    if init.len() != k {
        return Err(LaneError::Parameter(format!(
            "kmeans needs {k} seeds, got {}",
            init.len()
        )));
    }
    ensure_finite(points)?;

    let mut distinct: Vec<Point2> = Vec::new();
    for p in points {
        if !distinct.iter().any(|q| q.x == p.x && q.y == p.y) {
            distinct.push(*p);
        }
    }
    let (k, reduced_k, mut centroids) = if distinct.len() < k {
        (distinct.len(), true, distinct)
    } else {
        (k, false, init.to_vec())
    };

    let mut labels = vec![0usize; points.len()];
    for _ in 0..max_iter.max(1) {
        let mut changed = false;
        for (i, p) in points.iter().enumerate() {
            let mut best = 0usize;
            let mut best_d = f64::INFINITY;
            for (c, cv) in centroids.iter().enumerate() {
                let d = p.dist(cv);
                if d < best_d {
                    best_d = d;
                    best = c;
                }
            }
            if labels[i] != best {
                labels[i] = best;
                changed = true;
            }
        }
        let mut sums = vec![(0.0f64, 0.0f64); k];
        let mut counts = vec![0usize; k];
        for (i, p) in points.iter().enumerate() {
            sums[labels[i]].0 += p.x;
            sums[labels[i]].1 += p.y;
            counts[labels[i]] += 1;
        }
        for c in 0..k {
            if counts[c] > 0 {
                centroids[c] = Point2::new(sums[c].0 / counts[c] as f64, sums[c].1 / counts[c] as f64);
            }
        }
        if !changed {
            break;
        }
    }

    Ok(ClusterResult {
        labels: labels.into_iter().map(Label::Cluster).collect(),
        centroids,
        reduced_k,
    })
}

/// Within-cluster sum of squared distances for a 1-D clustering.
pub fn sse_1d(values: &[f64], result: &ClusterResult<f64>) -> f64 {
    values
        .iter()
        .zip(&result.labels)
        .map(|(&v, l)| match l {
            Label::Cluster(c) => (v - result.centroids[*c]).powi(2),
            Label::Noise => 0.0,
        })
        .sum()
}
