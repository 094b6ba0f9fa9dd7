//! Lane-line discrimination with DBSCAN over Hough segment points.
//!
//! Segment endpoints and midpoints are clustered; the two clusters closest
//! to the image bottom (directly in front of the vehicle) are selected and
//! their centroids averaged. A single surviving cluster falls back to the
//! static-offset trick so the hairpin, where the inner line leaves the
//! view, degrades gracefully instead of invalidating.

use crate::detectors::{DetectInput, DetectorConfig, LaneCenterEstimate, LaneDetector, PreprocessedFrame};
use crate::estimation::{dbscan, Label, Point2};
use crate::vision::{canny_with_sigma, hough_segments, LineSegment, VisionConfig};

/// Clusters ranked by how close they reach toward the image bottom.
pub(crate) struct RankedCluster {
    pub centroid: Point2,
    pub max_y: f64,
}

pub(crate) fn rank_clusters(points: &[Point2], eps: f64, min_points: usize) -> Vec<RankedCluster> {
    let Ok(result) = dbscan(points, eps, min_points) else {
        return Vec::new();
    };
    let k = result.cluster_count();
    let mut ranked: Vec<RankedCluster> = (0..k)
        .map(|c| RankedCluster {
            centroid: result.centroids[c],
            max_y: f64::NEG_INFINITY,
        })
        .collect();
    for (p, l) in points.iter().zip(&result.labels) {
        if let Label::Cluster(c) = l {
            ranked[*c].max_y = ranked[*c].max_y.max(p.y);
        }
    }
    ranked.sort_by(|a, b| b.max_y.partial_cmp(&a.max_y).unwrap());
    ranked
}

pub(crate) fn segment_points(segments: &[LineSegment]) -> Vec<Point2> {
    let mut points = Vec::with_capacity(segments.len() * 3);
    for s in segments {
        points.push(Point2::new(s.x1, s.y1));
        points.push(Point2::new(s.x2, s.y2));
        let (mx, my) = s.midpoint();
        points.push(Point2::new(mx, my));
    }
    points
}

/// Estimate from ranked clusters; shared with the external-lines detector.
/// Returns (estimate, single_line_flag). Coordinates are in the same frame
/// as the input points.
pub(crate) fn estimate_from_clusters(
    ranked: &[RankedCluster],
    cfg: &DetectorConfig,
    tick: i64,
) -> (LaneCenterEstimate, bool) {
    match ranked.len() {
        0 => (LaneCenterEstimate::invalid(tick), false),
        1 => {
            let c = &ranked[0].centroid;
            (
                LaneCenterEstimate::at(c.x + cfg.contour_offset_px, c.y, tick),
                true,
            )
        }
        _ => {
            let (a, b) = (&ranked[0].centroid, &ranked[1].centroid);
            if (a.x - b.x).abs() < cfg.same_line_px {
                // Both clusters hug one physical line (a fragmented curve);
                // fall back to the single-line offset on their mean.
                let (mx, my) = ((a.x + b.x) / 2.0, (a.y + b.y) / 2.0);
                return (
                    LaneCenterEstimate::at(mx + cfg.contour_offset_px, my, tick),
                    true,
                );
            }
            (
                LaneCenterEstimate::at((a.x + b.x) / 2.0, (a.y + b.y) / 2.0, tick),
                false,
            )
        }
    }
}

pub fn detect_dbscan(
    pre: &PreprocessedFrame,
    cfg: &DetectorConfig,
    vision: &VisionConfig,
    tick: i64,
) -> (LaneCenterEstimate, bool) {
    let gray = pre.mask.to_gray();
    let Ok(edges) = canny_with_sigma(&gray, vision.canny_lo, vision.canny_hi, vision.canny_sigma)
    else {
        return (LaneCenterEstimate::invalid(tick), false);
    };
    let Ok(segments) = hough_segments(&edges, &vision.hough) else {
        return (LaneCenterEstimate::invalid(tick), false);
    };
    let points = segment_points(&segments);
    let ranked = rank_clusters(&points, cfg.eps, cfg.min_points);
    let (mut est, single) = estimate_from_clusters(&ranked, cfg, tick);
    if est.valid {
        est.cy += pre.row_offset as f64;
        est = est.clamped(pre.full_width, pre.full_height);
    }
    (est, single)
}

#[derive(Debug, Clone)]
pub struct DbscanDetector {
    cfg: DetectorConfig,
    vision: VisionConfig,
    last_single_line: bool,
}

impl DbscanDetector {
    pub fn new(cfg: DetectorConfig, vision: VisionConfig) -> Self {
        Self {
            cfg,
            vision,
            last_single_line: false,
        }
    }

    /// Whether the most recent estimate came from the single-cluster
    /// fallback path.
    pub fn last_single_line(&self) -> bool {
        self.last_single_line
    }
}

impl LaneDetector for DbscanDetector {
    fn name(&self) -> &'static str {
        "dbscan"
    }

    fn detect(&mut self, input: &DetectInput<'_>) -> LaneCenterEstimate {
        let (est, single) = detect_dbscan(input.pre, &self.cfg, &self.vision, input.tick);
        self.last_single_line = single;
        est
    }

    fn reset(&mut self) {
        self.last_single_line = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detectors::test_util::{draw_vertical_band, frame_from_mask};
    use crate::vision::BinaryMask;

    fn two_line_frame() -> PreprocessedFrame {
        let mut mask = BinaryMask::filled(640, 216, false);
        draw_vertical_band(&mut mask, 148, 5, 20, 210);
        draw_vertical_band(&mut mask, 448, 5, 20, 210);
        frame_from_mask(mask, 264)
    }

    #[test]
    fn two_line_scene_centers_between_them() {
        let pre = two_line_frame();
        let (est, single) =
            detect_dbscan(&pre, &DetectorConfig::default(), &VisionConfig::default(), 1);
        assert!(est.valid);
        assert!(!single);
        // Strokes centered at x=150 and x=450.
        assert!((est.cx - 300.0).abs() <= 4.0, "cx = {}", est.cx);
        assert_eq!(est.tick, 1);
    }

    #[test]
    fn far_cluster_near_top_is_excluded_by_bottom_ranking() {
        let mut mask = BinaryMask::filled(640, 216, false);
        draw_vertical_band(&mut mask, 148, 5, 20, 210);
        draw_vertical_band(&mut mask, 448, 5, 20, 210);
        // Clutter line near the top of the ROI (an opposing-lane mark).
        draw_vertical_band(&mut mask, 598, 5, 2, 60);
        let pre = frame_from_mask(mask, 264);
        let (est, _) =
            detect_dbscan(&pre, &DetectorConfig::default(), &VisionConfig::default(), 0);
        assert!(est.valid);
        assert!((est.cx - 300.0).abs() <= 4.0, "cx = {}", est.cx);
    }

    #[test]
    fn single_line_applies_offset_and_flags() {
        let mut mask = BinaryMask::filled(640, 216, false);
        draw_vertical_band(&mut mask, 448, 5, 20, 210);
        let pre = frame_from_mask(mask, 264);
        let cfg = DetectorConfig::default();
        let (est, single) = detect_dbscan(&pre, &cfg, &VisionConfig::default(), 0);
        assert!(est.valid);
        assert!(single);
        assert!((est.cx - (450.0 + cfg.contour_offset_px)).abs() <= 4.0, "cx = {}", est.cx);
    }

    #[test]
    fn empty_scene_is_invalid() {
        let pre = frame_from_mask(BinaryMask::filled(640, 216, false), 264);
        let (est, _) =
            detect_dbscan(&pre, &DetectorConfig::default(), &VisionConfig::default(), 0);
        assert!(!est.valid);
    }

    #[test]
    fn sparse_points_are_all_noise() {
        use crate::estimation::Point2;
        let points: Vec<Point2> = (0..6)
            .map(|i| Point2::new(i as f64 * 100.0, (i % 3) as f64 * 80.0))
            .collect();
        let ranked = rank_clusters(&points, 1.0, 2);
        assert!(ranked.is_empty());
        let (est, _) = estimate_from_clusters(&ranked, &DetectorConfig::default(), 0);
        assert!(!est.valid);
    }
}
