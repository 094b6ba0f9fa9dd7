//! Connected components ("contours") and their spatial moments.

use std::collections::VecDeque;

use crate::error::{LaneError, Result};
use crate::vision::BinaryMask;

/// An 8-connected component of true pixels, stored as (x, y) pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contour {
    pub pixels: Vec<(usize, usize)>,
}

/// One contour per 8-connected component, in scanline discovery order.
pub fn find_contours(mask: &BinaryMask) -> Vec<Contour> {
    let (w, h) = (mask.width(), mask.height());
    let mut visited = vec![false; w * h];
    let mut contours = Vec::new();
    let mut queue = VecDeque::new();

    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            if !mask.get(x, y) || visited[i] {
                continue;
            }
            visited[i] = true;
            queue.push_back((x, y));
            let mut pixels = Vec::new();
            while let Some((cx, cy)) = queue.pop_front() {
                pixels.push((cx, cy));
                for dy in -1isize..=1 {
                    for dx in -1isize..=1 {
                        if dx == 0 && dy == 0 {
                            continue;
                        }
                        let nx = cx as isize + dx;
                        let ny = cy as isize + dy;
                        if nx < 0 || ny < 0 || nx >= w as isize || ny >= h as isize {
                            continue;
                        }
                        let (nx, ny) = (nx as usize, ny as usize);
                        let ni = ny * w + nx;
                        if mask.get(nx, ny) && !visited[ni] {
                            visited[ni] = true;
                            queue.push_back((nx, ny));
                        }
                    }
                }
            }
            contours.push(Contour { pixels });
        }
    }
    contours
}

/// Zeroth moment: pixel count.
pub fn contour_area(c: &Contour) -> Result<f64> {
    if c.pixels.is_empty() {
        return Err(LaneError::EmptyInput("contour has no pixels".into()));
    }
    Ok(c.pixels.len() as f64)
}

/// (m10/m00, m01/m00) in pixel-center coordinates.
pub fn contour_centroid(c: &Contour) -> Result<(f64, f64)> {
    if c.pixels.is_empty() {
        return Err(LaneError::EmptyInput("contour has no pixels".into()));
    }
    let n = c.pixels.len() as f64;
    let sx: f64 = c.pixels.iter().map(|&(x, _)| x as f64).sum();
    let sy: f64 = c.pixels.iter().map(|&(_, y)| y as f64).sum();
    Ok((sx / n, sy / n))
}
