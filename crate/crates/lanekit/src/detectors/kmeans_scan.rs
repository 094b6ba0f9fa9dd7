//! Linear lane search: cluster the white pixels of a single horizontal band
//! with two-means, averaging the centroids for the lane center. Dropouts
//! reuse the previous frame's centroids.

use crate::detectors::{DetectInput, DetectorConfig, LaneCenterEstimate, LaneDetector, PreprocessedFrame};
use crate::estimation::{kmeans_1d, DEFAULT_MAX_ITER};

/// Centroids closer than this are treated as a collapsed (single-line)
/// clustering and rejected in favor of the history.
const COLLAPSE_PX: f64 = 20.0;

pub fn detect_kmeans_scan(
    pre: &PreprocessedFrame,
    cfg: &DetectorConfig,
    state: &mut Option<(f64, f64)>,
    tick: i64,
) -> LaneCenterEstimate {
    let band_center_full = (cfg.scan_row_fraction * pre.full_height as f64).round() as isize;
    let half = (cfg.band_height.max(1) / 2) as isize;
    let mask_h = pre.mask.height() as isize;

    let mut xs: Vec<f64> = Vec::new();
    for dy in -half..=half {
        let row_full = band_center_full + dy;
        let row_mask = row_full - pre.row_offset as isize;
        if row_mask < 0 || row_mask >= mask_h {
            continue;
        }
        let row = pre.mask.row(row_mask as usize);
        for (x, &on) in row.iter().enumerate() {
            if on {
                xs.push(x as f64);
            }
        }
    }

    let width = pre.full_width as f64;
    let seeds = match *state {
        Some((a, b)) => [a, b],
        None => [width / 4.0, 3.0 * width / 4.0],
    };

    let mut current: Option<(f64, f64)> = None;
    if xs.len() >= 2 {
        if let Ok(r) = kmeans_1d(&xs, 2, &seeds, DEFAULT_MAX_ITER) {
            if r.centroids.len() == 2 && (r.centroids[0] - r.centroids[1]).abs() >= COLLAPSE_PX {
                current = Some((r.centroids[0], r.centroids[1]));
            }
        }
    }

    if let Some(c) = current {
        *state = Some(c);
    }
    match *state {
        Some((a, b)) => LaneCenterEstimate::at((a + b) / 2.0, band_center_full as f64, tick)
            .clamped(pre.full_width, pre.full_height),
        None => LaneCenterEstimate::invalid(tick),
    }
}

#[derive(Debug, Clone)]
pub struct KmeansScanDetector {
    cfg: DetectorConfig,
    prev: Option<(f64, f64)>,
}

impl KmeansScanDetector {
    pub fn new(cfg: DetectorConfig) -> Self {
        Self { cfg, prev: None }
    }

    pub fn centroids(&self) -> Option<(f64, f64)> {
        self.prev
    }
}

impl LaneDetector for KmeansScanDetector {
    fn name(&self) -> &'static str {
        "kmeans"
    }

    fn detect(&mut self, input: &DetectInput<'_>) -> LaneCenterEstimate {
        detect_kmeans_scan(input.pre, &self.cfg, &mut self.prev, input.tick)
    }

    fn reset(&mut self) {
        self.prev = None;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detectors::test_util::{draw_vertical_band, frame_from_mask};
    use crate::vision::BinaryMask;

    fn band_frame(xs: &[usize]) -> PreprocessedFrame {
        // Frame 640x480, ROI offset 264 -> mask 640x216. Band at
        // 0.8*480 = 384 full-frame = row 120 in the mask.
        let mut mask = BinaryMask::filled(640, 216, false);
        for &x in xs {
            for dy in 116..125 {
                draw_vertical_band(&mut mask, x, 4, dy, dy + 1);
            }
        }
        frame_from_mask(mask, 264)
    }

    #[test]
    fn two_groups_average_to_lane_center() {
        let pre = band_frame(&[98, 498]);
        let mut state = None;
        let est = detect_kmeans_scan(&pre, &DetectorConfig::default(), &mut state, 1);
        assert!(est.valid);
        // Groups span x 98..102 and 498..502 -> centroids ~99.5 / 499.5.
        assert!((est.cx - 299.5).abs() < 1.0, "cx = {}", est.cx);
        assert_eq!(est.cy, 384.0);
        let (a, b) = state.unwrap();
        assert!((a.min(b) - 99.5).abs() < 1.0);
        assert!((a.max(b) - 499.5).abs() < 1.0);
    }

    #[test]
    fn empty_band_reuses_history() {
        let pre = band_frame(&[]);
        let mut state = Some((120.0, 480.0));
        let est = detect_kmeans_scan(&pre, &DetectorConfig::default(), &mut state, 2);
        assert!(est.valid);
        assert_eq!(est.cx, 300.0);
        assert_eq!(state, Some((120.0, 480.0)));
    }

    #[test]
    fn empty_band_without_history_is_invalid() {
        let pre = band_frame(&[]);
        let mut state = None;
        let est = detect_kmeans_scan(&pre, &DetectorConfig::default(), &mut state, 0);
        assert!(!est.valid);
        assert!(state.is_none());
    }

    #[test]
    fn collapsed_clusters_fall_back_to_history() {
        // Single tight group: two-means collapses inside the 20 px guard.
        let pre = band_frame(&[300]);
        let mut state = Some((100.0, 500.0));
        let est = detect_kmeans_scan(&pre, &DetectorConfig::default(), &mut state, 0);
        assert_eq!(est.cx, 300.0);
        assert_eq!(state, Some((100.0, 500.0)), "history must be kept");
    }

    #[test]
    fn never_invalid_after_first_valid_frame() {
        let mut det = KmeansScanDetector::new(DetectorConfig::default());
        let good = band_frame(&[98, 498]);
        let est = det.detect(&DetectInput {
            pre: &good,
            tick: 0,
            truth_px: None,
        });
        assert!(est.valid);
        let empty = band_frame(&[]);
        for tick in 1..20 {
            let est = det.detect(&DetectInput {
                pre: &empty,
                tick,
                truth_px: None,
            });
            assert!(est.valid, "tick {tick}");
        }
    }
}
