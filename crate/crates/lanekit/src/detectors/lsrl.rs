//! Bird's-eye least-squares detector: rectify, extract Hough segments,
//! fit one regression line per image half, and take the midpoint of the
//! two boundary lines at a fixed reference row.

use crate::detectors::{DetectInput, DetectorConfig, LaneCenterEstimate, LaneDetector, PreprocessedFrame};
use crate::estimation::{fit_least_squares, Point2};
use crate::error::LaneError;
use crate::vision::{canny_with_sigma, hough_segments, Homography, VisionConfig};

/// Reference row for evaluating the fitted boundary lines, as a fraction of
/// the warped image height.
const Y_REF_FRACTION: f64 = 0.75;

/// Boundary-line column at the reference row.
///
/// Lane lines are near-vertical after rectification, so the regression runs
/// column-on-row (the fit's abscissa is the image row); a degenerate fit
/// (all rows equal) falls back to the mean column of the side's points.
fn side_x_at(points: &[Point2], y_ref: f64) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let swapped: Vec<Point2> = points.iter().map(|p| Point2::new(p.y, p.x)).collect();
    match fit_least_squares(&swapped) {
        Ok(fit) => Some(fit.y_at(y_ref)),
        Err(LaneError::VerticalLine) => {
            Some(points.iter().map(|p| p.x).sum::<f64>() / points.len() as f64)
        }
        Err(_) => None,
    }
}

pub fn detect_lsrl(
    pre: &PreprocessedFrame,
    cfg: &DetectorConfig,
    vision: &VisionConfig,
    tick: i64,
) -> LaneCenterEstimate {
    // Warp quad is configured in full-frame pixels; shift into ROI coords.
    let off = pre.row_offset as f64;
    let src: [[f64; 2]; 4] = [
        [cfg.warp_src[0][0], cfg.warp_src[0][1] - off],
        [cfg.warp_src[1][0], cfg.warp_src[1][1] - off],
        [cfg.warp_src[2][0], cfg.warp_src[2][1] - off],
        [cfg.warp_src[3][0], cfg.warp_src[3][1] - off],
    ];
    let (ww, wh) = (cfg.warp_w, cfg.warp_h);
    let dst: [[f64; 2]; 4] = [
        [0.0, 0.0],
        [ww as f64, 0.0],
        [ww as f64, wh as f64],
        [0.0, wh as f64],
    ];
    let Ok(h) = Homography::from_quads(&src, &dst) else {
        return LaneCenterEstimate::invalid(tick);
    };
    let Ok(warped) = h.warp_mask(&pre.mask, ww, wh) else {
        return LaneCenterEstimate::invalid(tick);
    };
    let gray = warped.to_gray();
    let Ok(edges) = canny_with_sigma(&gray, vision.canny_lo, vision.canny_hi, vision.canny_sigma)
    else {
        return LaneCenterEstimate::invalid(tick);
    };
    let Ok(segments) = hough_segments(&edges, &vision.hough) else {
        return LaneCenterEstimate::invalid(tick);
    };

    // Discard near-horizontal clutter and stubs, then split endpoints by
    // the warped-image vertical midline.
    let midline = ww as f64 / 2.0;
    let mut left: Vec<Point2> = Vec::new();
    let mut right: Vec<Point2> = Vec::new();
    for s in &segments {
        if !s.steeper_than(cfg.slope_min) || s.length() < cfg.min_len {
            continue;
        }
        for (x, y) in [(s.x1, s.y1), (s.x2, s.y2)] {
            if x < midline {
                left.push(Point2::new(x, y));
            } else {
                right.push(Point2::new(x, y));
            }
        }
    }

    let y_ref = Y_REF_FRACTION * wh as f64;
    let left_x = side_x_at(&left, y_ref);
    let right_x = side_x_at(&right, y_ref);
    // A missing side substitutes a vertical line at that image edge.
    let (lx, rx) = match (left_x, right_x) {
        (None, None) => return LaneCenterEstimate::invalid(tick),
        (l, r) => (l.unwrap_or(0.0), r.unwrap_or((ww - 1) as f64)),
    };
    let cx_warped = ((lx + rx) / 2.0).clamp(0.0, (ww - 1) as f64);

    // Back to ROI coordinates, then full frame.
    let Ok(inv) = h.inverse() else {
        return LaneCenterEstimate::invalid(tick);
    };
    let (cx_roi, cy_roi) = inv.apply_point(cx_warped, y_ref);
    LaneCenterEstimate::at(cx_roi, cy_roi + off, tick).clamped(pre.full_width, pre.full_height)
}

#[derive(Debug, Clone)]
pub struct LsrlDetector {
    cfg: DetectorConfig,
    vision: VisionConfig,
}

impl LsrlDetector {
    pub fn new(cfg: DetectorConfig, vision: VisionConfig) -> Self {
        Self { cfg, vision }
    }
}

impl LaneDetector for LsrlDetector {
    fn name(&self) -> &'static str {
        "lsrl"
    }

    fn detect(&mut self, input: &DetectInput<'_>) -> LaneCenterEstimate {
        detect_lsrl(input.pre, &self.cfg, &self.vision, input.tick)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detectors::test_util::frame_from_mask;
    use crate::vision::BinaryMask;

    /// Draws a stroke in ROI coordinates along the preimage of a vertical
    /// line at warped x, so the warped image contains a clean vertical bar.
    fn draw_warped_vertical(
        mask: &mut BinaryMask,
        h: &Homography,
        x_warped: f64,
        wh: usize,
        half_width: f64,
    ) {
        let inv = h.inverse().unwrap();
        for wy in 0..wh * 4 {
            let yw = wy as f64 / 4.0;
            for dx in -((half_width * 4.0) as i32)..=((half_width * 4.0) as i32) {
                let xw = x_warped + dx as f64 / 4.0;
                let (sx, sy) = inv.apply_point(xw, yw);
                let (ix, iy) = (sx.round() as isize, sy.round() as isize);
                if ix >= 0 && iy >= 0 && (ix as usize) < mask.width() && (iy as usize) < mask.height()
                {
                    mask.set(ix as usize, iy as usize, true);
                }
            }
        }
    }

    fn warp_homography(cfg: &DetectorConfig, row_offset: usize) -> Homography {
        let off = row_offset as f64;
        let src: [[f64; 2]; 4] = [
            [cfg.warp_src[0][0], cfg.warp_src[0][1] - off],
            [cfg.warp_src[1][0], cfg.warp_src[1][1] - off],
            [cfg.warp_src[2][0], cfg.warp_src[2][1] - off],
            [cfg.warp_src[3][0], cfg.warp_src[3][1] - off],
        ];
        let dst: [[f64; 2]; 4] = [
            [0.0, 0.0],
            [cfg.warp_w as f64, 0.0],
            [cfg.warp_w as f64, cfg.warp_h as f64],
            [0.0, cfg.warp_h as f64],
        ];
        Homography::from_quads(&src, &dst).unwrap()
    }

    #[test]
    fn symmetric_lines_give_warped_center() {
        let cfg = DetectorConfig::default();
        let h = warp_homography(&cfg, 264);
        let mut mask = BinaryMask::filled(640, 216, false);
        draw_warped_vertical(&mut mask, &h, 160.0, cfg.warp_h, 6.0);
        draw_warped_vertical(&mut mask, &h, 480.0, cfg.warp_h, 6.0);
        let pre = frame_from_mask(mask, 264);
        let est = detect_lsrl(&pre, &cfg, &VisionConfig::default(), 0);
        assert!(est.valid);
        // cx_warped should be ~320; unwarp and compare against the same
        // homography's prediction.
        let inv = h.inverse().unwrap();
        let (ex, ey) = inv.apply_point(320.0, 0.75 * cfg.warp_h as f64);
        assert!((est.cx - ex).abs() <= 5.0, "cx {} vs {ex}", est.cx);
        assert!((est.cy - (ey + 264.0)).abs() <= 3.0, "cy {} vs {}", est.cy, ey + 264.0);
    }

    #[test]
    fn missing_left_side_falls_back_to_edge() {
        let cfg = DetectorConfig::default();
        let h = warp_homography(&cfg, 264);
        let mut mask = BinaryMask::filled(640, 216, false);
        draw_warped_vertical(&mut mask, &h, 480.0, cfg.warp_h, 6.0);
        let pre = frame_from_mask(mask, 264);
        let est = detect_lsrl(&pre, &cfg, &VisionConfig::default(), 0);
        assert!(est.valid);
        // Left fallback at x=0: cx_warped ~ (0 + 480)/2 = 240.
        let inv = h.inverse().unwrap();
        let (ex, _) = inv.apply_point(240.0, 0.75 * cfg.warp_h as f64);
        assert!((est.cx - ex).abs() <= 6.0, "cx {} vs {ex}", est.cx);
    }

    #[test]
    fn horizontal_clutter_is_filtered() {
        let cfg = DetectorConfig::default();
        let h = warp_homography(&cfg, 264);
        let mut base = BinaryMask::filled(640, 216, false);
        draw_warped_vertical(&mut base, &h, 160.0, cfg.warp_h, 6.0);
        draw_warped_vertical(&mut base, &h, 480.0, cfg.warp_h, 6.0);
        let clean = detect_lsrl(
            &frame_from_mask(base.clone(), 264),
            &cfg,
            &VisionConfig::default(),
            0,
        );

        // Horizontal clutter bar across the ROI.
        let mut noisy = base.clone();
        for x in 100..540 {
            for y in 180..184 {
                noisy.set(x, y, true);
            }
        }
        let got = detect_lsrl(&frame_from_mask(noisy, 264), &cfg, &VisionConfig::default(), 0);
        assert!(clean.valid && got.valid);
        assert!(
            (clean.cx - got.cx).abs() <= 6.0,
            "clutter moved cx from {} to {}",
            clean.cx,
            got.cx
        );
    }

    #[test]
    fn empty_scene_is_invalid() {
        let pre = frame_from_mask(BinaryMask::filled(640, 216, false), 264);
        let est = detect_lsrl(&pre, &DetectorConfig::default(), &VisionConfig::default(), 0);
        assert!(!est.valid);
    }
}
