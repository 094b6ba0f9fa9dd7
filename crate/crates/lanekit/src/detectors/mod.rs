//! The five lane-center estimators and the asynchronous wrapper that
//! decouples slow detectors from the 50 Hz control rate.
//!
//! Every detector maps a preprocessed frame (plus any per-detector state)
//! to a [`LaneCenterEstimate`] in full-frame pixel coordinates.

mod async_wrap;
mod contour_follow;
mod dbscan_lines;
mod external;
mod kmeans_scan;
mod lsrl;

pub use async_wrap::{SimAsyncDetector, ThreadedAsyncDetector};
pub use contour_follow::{detect_largest_contour, ContourDetector};
pub use dbscan_lines::{detect_dbscan, DbscanDetector};
pub use external::{
    detect_external_lines, parse_segment_batches, write_segment_batch, BatchParseStats,
    ExternalPipeline, ExternalSegmentBatch, HoughLineSource, LineSource,
};
pub use kmeans_scan::{detect_kmeans_scan, KmeansScanDetector};
pub use lsrl::{detect_lsrl, LsrlDetector};

use crate::error::Result;
use crate::vision::{crop_roi, median_blur, threshold_white, BinaryMask, GrayImage, RoiSpec, VisionConfig};

/// The single value every detector produces and every controller consumes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaneCenterEstimate {
    /// Estimated lane-center column, full-frame pixels.
    pub cx: f64,
    /// Reference row of the estimate, full-frame pixels.
    pub cy: f64,
    pub valid: bool,
    /// Source frame counter; -1 before any frame has been processed.
    pub tick: i64,
    /// Processing time attributed by the caller (wall clock in benchmarks,
    /// simulated latency in episodes).
    pub proc_time_ms: f64,
}

impl LaneCenterEstimate {
    pub fn invalid(tick: i64) -> Self {
        Self {
            cx: 0.0,
            cy: 0.0,
            valid: false,
            tick,
            proc_time_ms: 0.0,
        }
    }

    pub fn at(cx: f64, cy: f64, tick: i64) -> Self {
        Self {
            cx,
            cy,
            valid: true,
            tick,
            proc_time_ms: 0.0,
        }
    }

    /// Clamps a valid estimate into frame bounds so downstream consumers
    /// can rely on 0 <= cx < width, 0 <= cy < height.
    pub fn clamped(mut self, width: usize, height: usize) -> Self {
        if self.valid {
            self.cx = self.cx.clamp(0.0, (width - 1) as f64);
            self.cy = self.cy.clamp(0.0, (height - 1) as f64);
        }
        self
    }
}

/// Per-detector tuning knobs.
#[derive(Debug, Clone)]
pub struct DetectorConfig {
    /// Signed x offset added to single-line estimates (largest contour and
    /// the DBSCAN single-cluster fallback). Negative points left, matching
    /// right-lane driving with a solid line on the right.
    pub contour_offset_px: f64,
    /// Row of the scan band as a fraction of the full frame height.
    pub scan_row_fraction: f64,
    /// Height of the scan band in rows (odd).
    pub band_height: usize,
    /// Minimum |dy/dx| for a segment to count as a lane-line candidate.
    pub slope_min: f64,
    /// DBSCAN radius in pixels. Must exceed half the longest expected
    /// segment so a lone line chains into one cluster, while staying below
    /// the inter-line pixel distance at the top of the ROI.
    pub eps: f64,
    /// DBSCAN core-point threshold.
    pub min_points: usize,
    /// Two selected clusters closer than this laterally are treated as
    /// fragments of one physical line (single-line fallback applies).
    pub same_line_px: f64,
    /// Minimum segment length for the slope/length filters.
    pub min_len: f64,
    /// Chaining distance for short curve fragments (external source).
    pub max_gap: f64,
    /// Bird's-eye warp: source quad in full-frame pixels.
    pub warp_src: [[f64; 2]; 4],
    /// Bird's-eye warp: output canvas size.
    pub warp_w: usize,
    pub warp_h: usize,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self {
            contour_offset_px: -160.0,
            scan_row_fraction: 0.8,
            band_height: 9,
            slope_min: 0.3,
            eps: 105.0,
            min_points: 3,
            same_line_px: 60.0,
            min_len: 25.0,
            max_gap: 10.0,
            // Image of a flat-ground rectangle (lateral ±2.2 m, 2–6 m ahead
            // of the camera) under the default camera; recomputed by the
            // harness when the camera changes.
            warp_src: [
                [244.6, 270.5],
                [395.4, 270.5],
                [546.0, 349.5],
                [94.0, 349.5],
            ],
            warp_w: 640,
            warp_h: 240,
        }
    }
}

/// ROI-cropped mask plus the bookkeeping needed to map detector output back
/// to full-frame coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreprocessedFrame {
    pub mask: BinaryMask,
    pub row_offset: usize,
    pub full_width: usize,
    pub full_height: usize,
}

/// Blur → threshold → ROI crop, the preprocessing chain shared by all
/// detectors.
pub fn preprocess(gray: &GrayImage, cfg: &VisionConfig) -> Result<PreprocessedFrame> {
    let blurred = median_blur(gray, cfg.median_k)?;
    let mask = threshold_white(&blurred, cfg.threshold_lo, cfg.threshold_hi)?;
    let roi = RoiSpec::new(cfg.roi_top_fraction)?;
    let (mask, row_offset) = crop_roi(&mask, roi);
    Ok(PreprocessedFrame {
        mask,
        row_offset,
        full_width: gray.width(),
        full_height: gray.height(),
    })
}

/// Per-tick input handed to a detector.
#[derive(Debug, Clone, Copy)]
pub struct DetectInput<'a> {
    pub pre: &'a PreprocessedFrame,
    pub tick: i64,
    /// Ground-truth lane-center pixel supplied by the simulator for the
    /// oracle/debug detector. Real detectors must ignore it.
    pub truth_px: Option<(f64, f64)>,
}

/// A lane-center estimator with optional per-instance state.
pub trait LaneDetector: Send {
    fn name(&self) -> &'static str;

    fn detect(&mut self, input: &DetectInput<'_>) -> LaneCenterEstimate;

    /// Clears any frame-to-frame state (history, queues) between episodes.
    fn reset(&mut self) {}

    /// Simulated processing latency attributed per frame in episode logs.
    fn sim_latency_ms(&self) -> f64 {
        0.0
    }
}

/// Debug detector that plays back the simulator's ground-truth lane center.
#[derive(Debug, Default)]
pub struct OracleDetector;

impl LaneDetector for OracleDetector {
    fn name(&self) -> &'static str {
        "oracle"
    }

    fn detect(&mut self, input: &DetectInput<'_>) -> LaneCenterEstimate {
        match input.truth_px {
            Some((cx, cy)) => LaneCenterEstimate::at(cx, cy, input.tick)
                .clamped(input.pre.full_width, input.pre.full_height),
            None => LaneCenterEstimate::invalid(input.tick),
        }
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preprocess_chains_blur_threshold_roi() {
        let mut gray = GrayImage::filled(64, 40, 60);
        // Bright block in the lower half, below the default ROI cut.
        for y in 30..38 {
            for x in 10..20 {
                gray.set(x, y, 230);
            }
        }
        let cfg = VisionConfig {
            roi_top_fraction: 0.5,
            ..VisionConfig::default()
        };
        let pre = preprocess(&gray, &cfg).unwrap();
        assert_eq!(pre.row_offset, 20);
        assert_eq!(pre.mask.height(), 20);
        assert_eq!(pre.full_height, 40);
        assert!(pre.mask.count_true() > 0);
        // Everything the mask marks lies inside the bright block (median
        // erodes the rim but cannot invent pixels elsewhere).
        for y in 0..pre.mask.height() {
            for x in 0..pre.mask.width() {
                if pre.mask.get(x, y) {
                    let fy = y + pre.row_offset;
                    assert!((30..38).contains(&fy) && (10..20).contains(&x));
                }
            }
        }
    }

    #[test]
    fn oracle_detector_plays_back_truth() {
        let mask = BinaryMask::filled(64, 32, false);
        let pre = test_util::frame_from_mask(mask, 32);
        let mut det = OracleDetector;
        let est = det.detect(&DetectInput {
            pre: &pre,
            tick: 3,
            truth_px: Some((31.0, 40.0)),
        });
        assert!(est.valid);
        assert_eq!((est.cx, est.cy, est.tick), (31.0, 40.0, 3));
        let est = det.detect(&DetectInput {
            pre: &pre,
            tick: 4,
            truth_px: None,
        });
        assert!(!est.valid);
    }
}
