//! Largest-white-contour detector: track the biggest blob and offset its
//! centroid toward the lane center.

use crate::detectors::{DetectInput, DetectorConfig, LaneCenterEstimate, LaneDetector, PreprocessedFrame};
use crate::vision::{contour_area, contour_centroid, find_contours};

/// Blobs below this area are treated as clutter.
const MIN_CONTOUR_AREA: f64 = 20.0;

pub fn detect_largest_contour(
    pre: &PreprocessedFrame,
    cfg: &DetectorConfig,
    tick: i64,
) -> LaneCenterEstimate {
    let contours = find_contours(&pre.mask);
    let largest = contours
        .iter()
        .max_by(|a, b| {
            contour_area(a)
                .unwrap_or(0.0)
                .partial_cmp(&contour_area(b).unwrap_or(0.0))
                .unwrap()
        })
        .filter(|c| contour_area(c).unwrap_or(0.0) >= MIN_CONTOUR_AREA);

    match largest {
        Some(c) => {
            let (mx, my) = contour_centroid(c).expect("largest contour is non-empty");
            LaneCenterEstimate::at(
                mx + cfg.contour_offset_px,
                my + pre.row_offset as f64,
                tick,
            )
            .clamped(pre.full_width, pre.full_height)
        }
        None => LaneCenterEstimate::invalid(tick),
    }
}

#[derive(Debug, Clone)]
pub struct ContourDetector {
    cfg: DetectorConfig,
}

impl ContourDetector {
    pub fn new(cfg: DetectorConfig) -> Self {
        Self { cfg }
    }
}

impl LaneDetector for ContourDetector {
    fn name(&self) -> &'static str {
        "contour"
    }

    fn detect(&mut self, input: &DetectInput<'_>) -> LaneCenterEstimate {
        detect_largest_contour(input.pre, &self.cfg, input.tick)
    }
}
