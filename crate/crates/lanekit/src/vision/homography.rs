//! Planar homography between pixel quads, used for bird's-eye rectification.

use crate::error::{LaneError, Result};
use crate::vision::{BinaryMask, GrayImage};

/// 3×3 projective transform; `m[2][2]` is kept at 1 where possible.
#[derive(Debug, Clone, Copy)]
pub struct Homography {
    m: [[f64; 3]; 3],
}

impl Homography {
    pub fn identity() -> Self {
        Self {
            m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    /// Solves the 8-equation linear system mapping the four src corners to
    /// the four dst corners. Degenerate quads (three collinear points)
    /// surface as a singular system.
    pub fn from_quads(src: &[[f64; 2]; 4], dst: &[[f64; 2]; 4]) -> Result<Self> {
        // Unknowns h11..h32 with h33 = 1.
        let mut a = [[0.0f64; 9]; 8]; // augmented: 8x8 | rhs
        for i in 0..4 {
            let [x, y] = src[i];
            let [u, v] = dst[i];
            a[2 * i] = [x, y, 1.0, 0.0, 0.0, 0.0, -u * x, -u * y, u];
            a[2 * i + 1] = [0.0, 0.0, 0.0, x, y, 1.0, -v * x, -v * y, v];
        }
        let h = solve_8x8(&mut a)?;
        Ok(Self {
            m: [
                [h[0], h[1], h[2]],
                [h[3], h[4], h[5]],
                [h[6], h[7], 1.0],
            ],
        })
    }

    pub fn apply_point(&self, x: f64, y: f64) -> (f64, f64) {
        let m = &self.m;
        let w = m[2][0] * x + m[2][1] * y + m[2][2];
        let u = m[0][0] * x + m[0][1] * y + m[0][2];
        let v = m[1][0] * x + m[1][1] * y + m[1][2];
        if w.abs() < 1e-12 {
            (f64::INFINITY, f64::INFINITY)
        } else {
            (u / w, v / w)
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        let m = &self.m;
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        if det.abs() < 1e-12 {
            return Err(LaneError::Singular("homography not invertible".into()));
        }
        let adj = [
            [
                m[1][1] * m[2][2] - m[1][2] * m[2][1],
                m[0][2] * m[2][1] - m[0][1] * m[2][2],
                m[0][1] * m[1][2] - m[0][2] * m[1][1],
            ],
            [
                m[1][2] * m[2][0] - m[1][0] * m[2][2],
                m[0][0] * m[2][2] - m[0][2] * m[2][0],
                m[0][2] * m[1][0] - m[0][0] * m[1][2],
            ],
            [
                m[1][0] * m[2][1] - m[1][1] * m[2][0],
                m[0][1] * m[2][0] - m[0][0] * m[2][1],
                m[0][0] * m[1][1] - m[0][1] * m[1][0],
            ],
        ];
        let mut out = [[0.0; 3]; 3];
        for (r, row) in adj.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                out[r][c] = v / det;
            }
        }
        // Renormalize so the bottom-right entry is 1 when it is nonzero.
        if out[2][2].abs() > 1e-12 {
            let s = out[2][2];
            for row in out.iter_mut() {
                for v in row.iter_mut() {
                    *v /= s;
                }
            }
        }
        Ok(Self { m: out })
    }

    /// Warps a grayscale image into an out_w × out_h canvas by inverse
    /// mapping with nearest-neighbor sampling; unmapped pixels get `fill`.
    pub fn warp_gray(&self, src: &GrayImage, out_w: usize, out_h: usize, fill: u8) -> Result<GrayImage> {
        let inv = self.inverse()?;
        let (sw, sh) = (src.width() as isize, src.height() as isize);
        let mut data = Vec::with_capacity(out_w * out_h);
        for y in 0..out_h {
            for x in 0..out_w {
                let (sx, sy) = inv.apply_point(x as f64, y as f64);
                let ix = sx.round() as isize;
                let iy = sy.round() as isize;
                if ix >= 0 && iy >= 0 && ix < sw && iy < sh {
                    data.push(src.get(ix as usize, iy as usize));
                } else {
                    data.push(fill);
                }
            }
        }
        GrayImage::new(out_w, out_h, data)
    }

    pub fn warp_mask(&self, src: &BinaryMask, out_w: usize, out_h: usize) -> Result<BinaryMask> {
        let inv = self.inverse()?;
        let (sw, sh) = (src.width() as isize, src.height() as isize);
        let mut data = Vec::with_capacity(out_w * out_h);
        for y in 0..out_h {
            for x in 0..out_w {
                let (sx, sy) = inv.apply_point(x as f64, y as f64);
                let ix = sx.round() as isize;
                let iy = sy.round() as isize;
                data.push(ix >= 0 && iy >= 0 && ix < sw && iy < sh && src.get(ix as usize, iy as usize));
            }
        }
        BinaryMask::new(out_w, out_h, data)
    }
}

/// Gaussian elimination with partial pivoting on an 8×8 augmented system.
fn solve_8x8(a: &mut [[f64; 9]; 8]) -> Result<[f64; 8]> {
    for col in 0..8 {
        let mut pivot = col;
        for row in col + 1..8 {
            if a[row][col].abs() > a[pivot][col].abs() {
                pivot = row;
            }
        }
        if a[pivot][col].abs() < 1e-10 {
            return Err(LaneError::Singular(
                "degenerate quad: homography system has no unique solution".into(),
            ));
        }
        a.swap(col, pivot);
        for row in col + 1..8 {
            let f = a[row][col] / a[col][col];
            for k in col..9 {
                a[row][k] -= f * a[col][k];
            }
        }
    }
    let mut x = [0.0f64; 8];
    for col in (0..8).rev() {
        let mut acc = a[col][8];
        for k in col + 1..8 {
            acc -= a[col][k] * x[k];
        }
        x[col] = acc / a[col][col];
    }
    Ok(x)
}
