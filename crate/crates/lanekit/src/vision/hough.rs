//! Probabilistic Hough transform for line segments.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{LaneError, Result};
use crate::vision::BinaryMask;

/// Line segment between two sub-pixel endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSegment {
    pub x1: f64,
    pub y1: f64,
    pub x2: f64,
    pub y2: f64,
}

impl LineSegment {
    pub fn new(x1: f64, y1: f64, x2: f64, y2: f64) -> Result<Self> {
        let seg = Self { x1, y1, x2, y2 };
        if seg.length() <= 0.0 {
            return Err(LaneError::Parameter(
                "line segment must have positive length".into(),
            ));
        }
        Ok(seg)
    }

    pub fn length(&self) -> f64 {
        (self.x2 - self.x1).hypot(self.y2 - self.y1)
    }

    /// dy/dx, or `None` when the segment is vertical (|dx| < 1e-9).
    pub fn slope(&self) -> Option<f64> {
        let dx = self.x2 - self.x1;
        if dx.abs() < 1e-9 {
            None
        } else {
            Some((self.y2 - self.y1) / dx)
        }
    }

    pub fn midpoint(&self) -> (f64, f64) {
        ((self.x1 + self.x2) / 2.0, (self.y1 + self.y2) / 2.0)
    }

    /// True when the segment is steeper than the given |dy/dx| bound
    /// (vertical segments always qualify).
    pub fn steeper_than(&self, slope_min: f64) -> bool {
        match self.slope() {
            None => true,
            Some(m) => m.abs() >= slope_min,
        }
    }
}

/// Accumulator and segment-extraction parameters.
#[derive(Debug, Clone, Copy)]
pub struct HoughParams {
    /// Rho resolution in pixels.
    pub rho_res: f64,
    /// Theta resolution in radians.
    pub theta_res: f64,
    /// Minimum accumulator votes before a line is traced.
    pub votes_min: u32,
    /// Minimum accepted segment length in pixels.
    pub min_len: f64,
    /// Maximum gap bridged while tracing a segment, in pixels.
    pub max_gap: f64,
}

impl Default for HoughParams {
    fn default() -> Self {
        Self {
            rho_res: 1.0,
            theta_res: std::f64::consts::PI / 180.0,
            votes_min: 30,
            min_len: 25.0,
            max_gap: 10.0,
        }
    }
}

/// Extracts line segments from an edge mask.
///
/// Progressive probabilistic variant: edge pixels are visited in a seeded
/// pseudo-random order, each voting over all theta bins; once a bin clears
/// `votes_min` the corresponding line is walked in both directions bridging
/// gaps up to `max_gap`, the traversed pixels are retired (their votes
/// removed), and the run is emitted when it reaches `min_len`. The fixed
/// seed keeps the output deterministic for a given mask.
pub fn hough_segments(edges: &BinaryMask, params: &HoughParams) -> Result<Vec<LineSegment>> {
    if params.rho_res <= 0.0 || params.theta_res <= 0.0 {
        return Err(LaneError::Parameter(format!(
            "hough resolutions must be > 0, got rho={} theta={}",
            params.rho_res, params.theta_res
        )));
    }
    let (w, h) = (edges.width(), edges.height());
    let mut points: Vec<(i32, i32)> = Vec::new();
    for y in 0..h {
        let row = edges.row(y);
        for (x, &on) in row.iter().enumerate() {
            if on {
                points.push((x as i32, y as i32));
            }
        }
    }
    if points.is_empty() {
        return Ok(Vec::new());
    }

    let n_theta = (std::f64::consts::PI / params.theta_res).ceil() as usize;
    let trig: Vec<(f64, f64)> = (0..n_theta)
        .map(|t| {
            let theta = t as f64 * params.theta_res;
            (theta.cos(), theta.sin())
        })
        .collect();
    let max_rho = (w as f64).hypot(h as f64);
    let n_rho = (2.0 * max_rho / params.rho_res).ceil() as usize + 1;
    let rho_index = |x: f64, y: f64, t: usize| -> usize {
        let rho = x * trig[t].0 + y * trig[t].1;
        ((rho + max_rho) / params.rho_res).round() as usize
    };

    let mut acc = vec![0i32; n_theta * n_rho];
    let mut mask: Vec<bool> = vec![false; w * h];
    for &(x, y) in &points {
        mask[y as usize * w + x as usize] = true;
    }
    let mut voted = vec![false; w * h];
    let mut segments = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x6c61_6e65);

    let max_gap = params.max_gap.max(0.0) as i32;

    // Fisher–Yates style consumption: pick one random remaining point per
    // iteration.
    let mut remaining = points;
    while !remaining.is_empty() {
        let pick = rng.gen_range(0..remaining.len());
        let (px, py) = remaining.swap_remove(pick);
        let pi = py as usize * w + px as usize;
        if !mask[pi] {
            continue; // retired by an earlier segment
        }

        // Vote.
        voted[pi] = true;
        let mut best_t = 0usize;
        let mut best_v = 0i32;
        for t in 0..n_theta {
            let idx = t * n_rho + rho_index(px as f64, py as f64, t);
            acc[idx] += 1;
            if acc[idx] > best_v {
                best_v = acc[idx];
                best_t = t;
            }
        }
        if best_v < params.votes_min as i32 {
            continue;
        }

        // Line direction for the winning normal angle.
        let (cos_t, sin_t) = trig[best_t];
        let (dir_x, dir_y) = (-sin_t, cos_t);
        let major_is_x = dir_x.abs() >= dir_y.abs();
        // Step with unit increment along the major axis.
        let (step_x, step_y) = if major_is_x {
            (dir_x.signum(), dir_y / dir_x.abs())
        } else {
            (dir_x / dir_y.abs(), dir_y.signum())
        };

        // Walk from the seed, checking a 3-pixel cross-section on the minor
        // axis so the 1-degree angle quantization cannot drift off a thin
        // line; hits re-center the walk. Returns the far endpoint and every
        // on-pixel consumed.
        let walk = |sx: f64, sy: f64| -> ((i32, i32), Vec<(i32, i32)>) {
            let (mut fx, mut fy) = (px as f64, py as f64);
            let mut last = (px, py);
            let mut consumed = Vec::new();
            let mut gap = 0i32;
            loop {
                fx += sx;
                fy += sy;
                let ix = fx.round() as i32;
                let iy = fy.round() as i32;
                if ix < 0 || iy < 0 || ix >= w as i32 || iy >= h as i32 {
                    break;
                }
                let mut hit = None;
                for d in [0i32, -1, 1] {
                    let (cx2, cy2) = if major_is_x { (ix, iy + d) } else { (ix + d, iy) };
                    if cx2 >= 0
                        && cy2 >= 0
                        && cx2 < w as i32
                        && cy2 < h as i32
                        && mask[cy2 as usize * w + cx2 as usize]
                    {
                        hit = Some((cx2, cy2));
                        break;
                    }
                }
                match hit {
                    Some(p) => {
                        last = p;
                        consumed.push(p);
                        gap = 0;
                        if major_is_x {
                            fy = 0.5 * fy + 0.5 * p.1 as f64;
                        } else {
                            fx = 0.5 * fx + 0.5 * p.0 as f64;
                        }
                    }
                    None => {
                        gap += 1;
                        if gap > max_gap {
                            break;
                        }
                    }
                }
            }
            (last, consumed)
        };
        let ((e1x, e1y), fwd) = walk(step_x, step_y);
        let ((e2x, e2y), bwd) = walk(-step_x, -step_y);

        // Retire the consumed corridor and withdraw the votes of pixels
        // that had voted.
        let mut retire = |ix: i32, iy: i32| {
            let idx = iy as usize * w + ix as usize;
            if mask[idx] {
                mask[idx] = false;
                if voted[idx] {
                    for t in 0..n_theta {
                        acc[t * n_rho + rho_index(ix as f64, iy as f64, t)] -= 1;
                    }
                    voted[idx] = false;
                }
            }
        };
        retire(px, py);
        for &(ix, iy) in fwd.iter().chain(bwd.iter()) {
            retire(ix, iy);
        }

        let len = ((e1x - e2x) as f64).hypot((e1y - e2y) as f64);
        if len >= params.min_len {
            segments.push(LineSegment {
                x1: e2x as f64,
                y1: e2y as f64,
                x2: e1x as f64,
                y2: e1y as f64,
            });
        }
    }
    Ok(segments)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn draw_line(mask: &mut BinaryMask, x1: i32, y1: i32, x2: i32, y2: i32) {
        let steps = (x2 - x1).abs().max((y2 - y1).abs()).max(1);
        for i in 0..=steps {
            let t = i as f64 / steps as f64;
            let x = (x1 as f64 + t * (x2 - x1) as f64).round() as usize;
            let y = (y1 as f64 + t * (y2 - y1) as f64).round() as usize;
            mask.set(x, y, true);
        }
    }

    fn endpoint_error(seg: &LineSegment, x1: f64, y1: f64, x2: f64, y2: f64) -> f64 {
        let d_fwd = ((seg.x1 - x1).hypot(seg.y1 - y1)).max((seg.x2 - x2).hypot(seg.y2 - y2));
        let d_rev = ((seg.x1 - x2).hypot(seg.y1 - y2)).max((seg.x2 - x1).hypot(seg.y2 - y1));
        d_fwd.min(d_rev)
    }

    #[test]
    fn empty_mask_gives_empty_output() {
        let mask = BinaryMask::filled(64, 64, false);
        let segs = hough_segments(&mask, &HoughParams::default()).unwrap();
        assert!(segs.is_empty());
    }

    #[test]
    fn diagonal_line_recovered_within_3px() {
        let mut mask = BinaryMask::filled(128, 128, false);
        draw_line(&mut mask, 10, 10, 100, 100);
        let segs = hough_segments(&mask, &HoughParams::default()).unwrap();
        assert_eq!(segs.len(), 1, "{segs:?}");
        assert!(
            endpoint_error(&segs[0], 10.0, 10.0, 100.0, 100.0) <= 3.0,
            "{segs:?}"
        );
    }

    #[test]
    fn two_parallel_lines_give_two_segments() {
        let mut mask = BinaryMask::filled(160, 120, false);
        draw_line(&mut mask, 30, 10, 30, 110);
        draw_line(&mut mask, 80, 10, 80, 110);
        let segs = hough_segments(&mask, &HoughParams::default()).unwrap();
        assert_eq!(segs.len(), 2, "{segs:?}");
        let mut xs: Vec<f64> = segs.iter().map(|s| s.midpoint().0).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((xs[0] - 30.0).abs() <= 2.0);
        assert!((xs[1] - 80.0).abs() <= 2.0);
    }

    #[test]
    fn all_segments_respect_min_len() {
        let mut mask = BinaryMask::filled(100, 100, false);
        draw_line(&mut mask, 5, 50, 90, 50);
        draw_line(&mut mask, 20, 20, 30, 20); // shorter than min_len
        let params = HoughParams {
            votes_min: 8,
            min_len: 20.0,
            ..HoughParams::default()
        };
        let segs = hough_segments(&mask, &params).unwrap();
        assert!(!segs.is_empty());
        assert!(segs.iter().all(|s| s.length() >= 20.0));
    }

    /// Distance from a point to a segment.
    fn point_seg_dist(px: f64, py: f64, s: &LineSegment) -> f64 {
        let (dx, dy) = (s.x2 - s.x1, s.y2 - s.y1);
        let len2 = dx * dx + dy * dy;
        let t = (((px - s.x1) * dx + (py - s.y1) * dy) / len2).clamp(0.0, 1.0);
        (px - s.x1 - t * dx).hypot(py - s.y1 - t * dy)
    }

    #[test]
    fn noiseless_line_is_covered_by_segments() {
        // Every pixel of an ideal gap-free line at least min_len long must
        // lie near some returned segment.
        let cases = [
            (12, 30, 115, 30),
            (64, 5, 64, 100),
            (10, 100, 110, 20),
            (15, 10, 100, 95),
        ];
        for &(x1, y1, x2, y2) in &cases {
            let mut mask = BinaryMask::filled(128, 128, false);
            draw_line(&mut mask, x1, y1, x2, y2);
            let segs = hough_segments(&mask, &HoughParams::default()).unwrap();
            assert!(!segs.is_empty(), "no segment for {:?}", (x1, y1, x2, y2));
            let steps = (x2 - x1).abs().max((y2 - y1).abs());
            for i in 0..=steps {
                let t = i as f64 / steps as f64;
                let px = x1 as f64 + t * (x2 - x1) as f64;
                let py = y1 as f64 + t * (y2 - y1) as f64;
                let d = segs
                    .iter()
                    .map(|s| point_seg_dist(px, py, s))
                    .fold(f64::INFINITY, f64::min);
                assert!(
                    d <= 3.0,
                    "case {:?}: pixel ({px},{py}) is {d} px from every segment",
                    (x1, y1, x2, y2)
                );
            }
        }
    }

    #[test]
    fn deterministic_across_calls() {
        let mut mask = BinaryMask::filled(128, 128, false);
        draw_line(&mut mask, 10, 10, 100, 100);
        draw_line(&mut mask, 30, 5, 30, 120);
        let a = hough_segments(&mask, &HoughParams::default()).unwrap();
        let b = hough_segments(&mask, &HoughParams::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn slope_accessor_signals_vertical() {
        let v = LineSegment::new(5.0, 0.0, 5.0, 10.0).unwrap();
        assert!(v.slope().is_none());
        let d = LineSegment::new(0.0, 0.0, 10.0, 5.0).unwrap();
        assert!((d.slope().unwrap() - 0.5).abs() < 1e-12);
        assert!(LineSegment::new(1.0, 1.0, 1.0, 1.0).is_err());
    }
}
