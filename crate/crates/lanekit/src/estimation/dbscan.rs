//! Density-based clustering with Euclidean metric and brute-force
//! neighborhoods.
//!
//! Point counts downstream of the Hough stage stay in the hundreds, so the
//! O(n²) neighbor search comfortably fits the latency budget. A point is a
//! core point when at least `min_points` points (itself included) lie
//! within `eps`; clusters are maximal density-connected sets; border points
//! join the first core cluster that reaches them in scan order; everything
//! else is noise. Output is deterministic for a given input order.

use crate::error::{LaneError, Result};
use crate::estimation::{ensure_finite, ClusterResult, Label, Point2};

pub fn dbscan(points: &[Point2], eps: f64, min_points: usize) -> Result<ClusterResult<Point2>> {
    if eps <= 0.0 {
        return Err(LaneError::Parameter(format!("eps must be > 0, got {eps}")));
    }
    if min_points == 0 {
        return Err(LaneError::Parameter("min_points must be >= 1".into()));
    }
    ensure_finite(points)?;
    let n = points.len();
    if n == 0 {
        return Ok(ClusterResult {
            labels: Vec::new(),
            centroids: Vec::new(),
            reduced_k: false,
        });
    }

    let neighbors = |i: usize| -> Vec<usize> {
        (0..n)
            .filter(|&j| points[i].dist(&points[j]) <= eps)
            .collect()
    };

    const UNVISITED: isize = -2;
    const NOISE: isize = -1;
    let mut labels = vec![UNVISITED; n];
    let mut cluster_id = 0isize;

    for i in 0..n {
        if labels[i] != UNVISITED {
            continue;
        }
        let seed_neighbors = neighbors(i);
        if seed_neighbors.len() < min_points {
            labels[i] = NOISE;
            continue;
        }
        labels[i] = cluster_id;
        let mut queue: std::collections::VecDeque<usize> = seed_neighbors.into();
        while let Some(j) = queue.pop_front() {
            if labels[j] == NOISE {
                labels[j] = cluster_id; // border point claimed by this cluster
            }
            if labels[j] != UNVISITED {
                continue;
            }
            labels[j] = cluster_id;
            let nj = neighbors(j);
            if nj.len() >= min_points {
                queue.extend(nj);
            }
        }
        cluster_id += 1;
    }

    let k = cluster_id as usize;
    let mut sums = vec![(0.0f64, 0.0f64, 0usize); k];
    for (i, &l) in labels.iter().enumerate() {
        if l >= 0 {
            let s = &mut sums[l as usize];
            s.0 += points[i].x;
            s.1 += points[i].y;
            s.2 += 1;
        }
    }
    let centroids = sums
        .iter()
        .map(|&(sx, sy, c)| Point2::new(sx / c as f64, sy / c as f64))
        .collect();

    Ok(ClusterResult {
        labels: labels
            .into_iter()
            .map(|l| {
                if l >= 0 {
                    Label::Cluster(l as usize)
                } else {
                    Label::Noise
                }
            })
            .collect(),
        centroids,
        reduced_k: false,
    })
}
