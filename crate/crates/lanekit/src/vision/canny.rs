//! Canny edge detector.
//!
//! The classical four stages: Gaussian smoothing, 3×3 Sobel gradients with
//! L2 magnitude, non-maximum suppression quantized to four directions, and
//! double-threshold hysteresis (weak edges survive only when 8-connected to
//! a strong edge). The one-pixel image border never carries edges.

use std::collections::VecDeque;

use crate::error::{LaneError, Result};
use crate::vision::{BinaryMask, GrayImage};

pub const DEFAULT_CANNY_SIGMA: f64 = 1.4;

pub fn canny(img: &GrayImage, lo_thresh: f64, hi_thresh: f64) -> Result<BinaryMask> {
    canny_with_sigma(img, lo_thresh, hi_thresh, DEFAULT_CANNY_SIGMA)
}

pub fn canny_with_sigma(
    img: &GrayImage,
    lo_thresh: f64,
    hi_thresh: f64,
    sigma: f64,
) -> Result<BinaryMask> {
    if lo_thresh > hi_thresh {
        return Err(LaneError::Parameter(format!(
            "canny thresholds inverted: lo={lo_thresh} > hi={hi_thresh}"
        )));
    }
    if sigma <= 0.0 {
        return Err(LaneError::Parameter(format!(
            "canny sigma must be > 0, got {sigma}"
        )));
    }
    let (w, h) = (img.width(), img.height());

    let smoothed = gaussian_smooth(img, sigma);

    // Sobel gradients with edge replication.
    let at = |x: isize, y: isize| -> f32 {
        let xx = x.clamp(0, w as isize - 1) as usize;
        let yy = y.clamp(0, h as isize - 1) as usize;
        smoothed[yy * w + xx]
    };
    let mut gx = vec![0f32; w * h];
    let mut gy = vec![0f32; w * h];
    let mut mag = vec![0f32; w * h];
    for y in 0..h as isize {
        for x in 0..w as isize {
            let sx = (at(x + 1, y - 1) + 2.0 * at(x + 1, y) + at(x + 1, y + 1))
                - (at(x - 1, y - 1) + 2.0 * at(x - 1, y) + at(x - 1, y + 1));
            let sy = (at(x - 1, y + 1) + 2.0 * at(x, y + 1) + at(x + 1, y + 1))
                - (at(x - 1, y - 1) + 2.0 * at(x, y - 1) + at(x + 1, y - 1));
            let i = y as usize * w + x as usize;
            gx[i] = sx;
            gy[i] = sy;
            mag[i] = (sx * sx + sy * sy).sqrt();
        }
    }

    // Non-maximum suppression with 4-direction quantization. A pixel
    // survives when its magnitude is >= the neighbor in the negative
    // gradient direction and strictly > the neighbor in the positive one;
    // the asymmetric tie-break keeps plateau edges one pixel wide.
    const TAN_22_5: f32 = 0.414_213_56;
    let mut nms = vec![0f32; w * h];
    for y in 1..h - 1 {
        for x in 1..w - 1 {
            let i = y * w + x;
            let m = mag[i];
            if m == 0.0 {
                continue;
            }
            let (dx, dy) = (gx[i], gy[i]);
            let (ax, ay) = (dx.abs(), dy.abs());
            let (neg, pos) = if ay <= ax * TAN_22_5 {
                (mag[i - 1], mag[i + 1])
            } else if ax <= ay * TAN_22_5 {
                (mag[i - w], mag[i + w])
            } else if (dx > 0.0) == (dy > 0.0) {
                (mag[i - w - 1], mag[i + w + 1])
            } else {
                (mag[i - w + 1], mag[i + w - 1])
            };
            if m >= neg && m > pos {
                nms[i] = m;
            }
        }
    }

    // Hysteresis: flood from strong pixels through weak neighbors.
    let lo = lo_thresh as f32;
    let hi = hi_thresh as f32;
    let mut out = vec![false; w * h];
    let mut queue = VecDeque::new();
    for (i, &m) in nms.iter().enumerate() {
        if m >= hi && !out[i] {
            out[i] = true;
            queue.push_back(i);
            while let Some(j) = queue.pop_front() {
                let (jx, jy) = (j % w, j / w);
                for dy in -1isize..=1 {
                    for dx in -1isize..=1 {
                        if dx == 0 && dy == 0 {
                            continue;
                        }
                        let nx = jx as isize + dx;
                        let ny = jy as isize + dy;
                        if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                            continue;
                        }
                        let n = ny as usize * w + nx as usize;
                        if !out[n] && nms[n] >= lo {
                            out[n] = true;
                            queue.push_back(n);
                        }
                    }
                }
            }
        }
    }
    BinaryMask::new(w, h, out)
}

/// Separable Gaussian blur with edge replication, radius ceil(3 sigma).
fn gaussian_smooth(img: &GrayImage, sigma: f64) -> Vec<f32> {
    let (w, h) = (img.width(), img.height());
    let radius = (3.0 * sigma).ceil() as isize;
    let mut kernel = Vec::with_capacity((2 * radius + 1) as usize);
    let denom = 2.0 * sigma * sigma;
    for d in -radius..=radius {
        kernel.push((-(d * d) as f64 / denom).exp());
    }
    let sum: f64 = kernel.iter().sum();
    let kernel: Vec<f32> = kernel.iter().map(|k| (k / sum) as f32).collect();

    // Horizontal pass.
    let mut tmp = vec![0f32; w * h];
    for y in 0..h {
        let row = img.row(y);
        for x in 0..w as isize {
            let mut acc = 0f32;
            for (ki, d) in (-radius..=radius).enumerate() {
                let xx = (x + d).clamp(0, w as isize - 1) as usize;
                acc += kernel[ki] * row[xx] as f32;
            }
            tmp[y * w + x as usize] = acc;
        }
    }
    // Vertical pass.
    let mut out = vec![0f32; w * h];
    for y in 0..h as isize {
        for x in 0..w {
            let mut acc = 0f32;
            for (ki, d) in (-radius..=radius).enumerate() {
                let yy = (y + d).clamp(0, h as isize - 1) as usize;
                acc += kernel[ki] * tmp[yy * w + x];
            }
            out[y as usize * w + x] = acc;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent gradient oracle: Gaussian smooth then Sobel, written as
    /// plain nested loops over an f64 buffer.
    fn oracle_sobel_magnitude(img: &GrayImage, sigma: f64, x: usize, y: usize) -> f64 {
        let (w, h) = (img.width() as isize, img.height() as isize);
        let radius = (3.0 * sigma).ceil() as isize;
        let denom = 2.0 * sigma * sigma;
        let mut kernel = Vec::new();
        for d in -radius..=radius {
            kernel.push((-(d * d) as f64 / denom).exp());
        }
        let s: f64 = kernel.iter().sum();
        for k in kernel.iter_mut() {
            *k /= s;
        }
        let pixel = |px: isize, py: isize| -> f64 {
            img.get(
                px.clamp(0, w - 1) as usize,
                py.clamp(0, h - 1) as usize,
            ) as f64
        };
        let smooth = |px: isize, py: isize| -> f64 {
            let mut acc = 0.0;
            for (ki, dy) in (-radius..=radius).enumerate() {
                for (kj, dx) in (-radius..=radius).enumerate() {
                    acc += kernel[ki] * kernel[kj] * pixel(px + dx, py + dy);
                }
            }
            acc
        };
        let (x, y) = (x as isize, y as isize);
        let sx = (smooth(x + 1, y - 1) + 2.0 * smooth(x + 1, y) + smooth(x + 1, y + 1))
            - (smooth(x - 1, y - 1) + 2.0 * smooth(x - 1, y) + smooth(x - 1, y + 1));
        let sy = (smooth(x - 1, y + 1) + 2.0 * smooth(x, y + 1) + smooth(x + 1, y + 1))
            - (smooth(x - 1, y - 1) + 2.0 * smooth(x, y - 1) + smooth(x + 1, y - 1));
        (sx * sx + sy * sy).sqrt()
    }

    fn vertical_step(w: usize, h: usize, step_col: usize, low: u8, high: u8) -> GrayImage {
        let mut data = Vec::with_capacity(w * h);
        for _y in 0..h {
            for x in 0..w {
                data.push(if x < step_col { low } else { high });
            }
        }
        GrayImage::new(w, h, data).unwrap()
    }

    #[test]
    fn constant_image_has_no_edges() {
        for v in [0u8, 128, 255] {
            let img = GrayImage::filled(32, 24, v);
            let edges = canny(&img, 20.0, 60.0).unwrap();
            assert_eq!(edges.count_true(), 0);
        }
    }

    #[test]
    fn vertical_step_yields_single_edge_column() {
        let img = vertical_step(40, 30, 20, 0, 255);
        let edges = canny(&img, 60.0, 140.0).unwrap();
        // Away from the top/bottom border, each row must contain exactly one
        // edge pixel, within one pixel of the step boundary.
        for y in 8..22 {
            let cols: Vec<usize> = (0..40).filter(|&x| edges.get(x, y)).collect();
            assert_eq!(cols.len(), 1, "row {y}: {cols:?}");
            assert!((cols[0] as isize - 20).abs() <= 1, "row {y}: {cols:?}");
        }
    }

    #[test]
    fn step_gradient_matches_oracle() {
        let img = vertical_step(40, 30, 20, 0, 255);
        // The implementation's internals are not exposed; instead verify the
        // oracle's prediction of where the maximal response sits drives the
        // detected edge: thresholds bracketing the oracle peak still detect,
        // thresholds above it detect nothing.
        let peak = (0..40)
            .map(|x| oracle_sobel_magnitude(&img, DEFAULT_CANNY_SIGMA, x, 15))
            .fold(0.0f64, f64::max);
        let edges = canny(&img, peak * 0.5, peak * 0.9).unwrap();
        assert!(edges.count_true() > 0);
        let none = canny(&img, peak * 1.1, peak * 1.2).unwrap();
        assert_eq!(none.count_true(), 0);
    }

    #[test]
    fn hysteresis_keeps_connected_weak_drops_isolated_weak() {
        let (w, h) = (41, 72);
        // One vertical step edge whose height tapers from 255 (strong) to
        // 60 (weak) along the column, so the weak stretch is 8-connected to
        // the strong stretch through a continuous edge chain.
        let weak_high = 60u8;
        let step_height = |y: usize| -> u8 {
            if y < 18 {
                255
            } else if y < 48 {
                let t = (y - 18) as f64 / 30.0;
                (255.0 + t * (weak_high as f64 - 255.0)).round() as u8
            } else {
                weak_high
            }
        };
        let mut data = Vec::with_capacity(w * h);
        for y in 0..h {
            for x in 0..w {
                data.push(if x < 20 { 0 } else { step_height(y) });
            }
        }
        let img = GrayImage::new(w, h, data).unwrap();

        let strong_mag = oracle_sobel_magnitude(&img, DEFAULT_CANNY_SIGMA, 20, 8);
        let weak_mag = oracle_sobel_magnitude(&img, DEFAULT_CANNY_SIGMA, 20, 60);
        assert!(strong_mag > weak_mag * 2.0);
        let lo = weak_mag * 0.5;
        let hi = (weak_mag + strong_mag) / 2.0;

        let edges = canny(&img, lo, hi).unwrap();
        let weak_rows_present = (54..66)
            .filter(|&y| (0..w).any(|x| edges.get(x, y)))
            .count();
        assert!(
            weak_rows_present >= 10,
            "connected weak edge must survive hysteresis ({weak_rows_present} rows)"
        );

        // Same weak step alone: nothing clears the high threshold.
        let img_weak = vertical_step(w, h, 20, 0, weak_high);
        let edges_weak = canny(&img_weak, lo, hi).unwrap();
        assert_eq!(edges_weak.count_true(), 0, "isolated weak edge must die");
    }

    #[test]
    fn inverted_thresholds_rejected() {
        let img = GrayImage::filled(8, 8, 0);
        assert!(matches!(
            canny(&img, 100.0, 50.0),
            Err(LaneError::Parameter(_))
        ));
    }
}
