//! Point and neighborhood filters used by the preprocessing chain.

use crate::error::{LaneError, Result};
use crate::vision::{BinaryMask, GrayImage, RgbImage, RoiSpec};

/// Converts an RGB raster to 8-bit luma: round(0.299 R + 0.587 G + 0.114 B).
pub fn to_grayscale(rgb: &RgbImage) -> GrayImage {
    let (w, h) = (rgb.width(), rgb.height());
    let mut data = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let (r, g, b) = rgb.get(x, y);
            let luma = 0.299 * r as f64 + 0.587 * g as f64 + 0.114 * b as f64;
            data.push(luma.round().clamp(0.0, 255.0) as u8);
        }
    }
    GrayImage::new(w, h, data).expect("same dimensions as input")
}

/// Median filter over a k×k neighborhood with edge replication at borders.
///
/// Uses a sliding 256-bin histogram with an incrementally tracked median,
/// so cost per pixel is O(k) rather than O(k² log k).
pub fn median_blur(img: &GrayImage, k: usize) -> Result<GrayImage> {
    if k == 0 || k % 2 == 0 {
        return Err(LaneError::Parameter(format!(
            "median kernel size must be odd and >= 1, got {k}"
        )));
    }
    if k > img.width().min(img.height()) {
        return Err(LaneError::Parameter(format!(
            "median kernel {k} exceeds image dimensions {}x{}",
            img.width(),
            img.height()
        )));
    }
    if k == 1 {
        return Ok(img.clone());
    }

    let (w, h) = (img.width(), img.height());
    let r = k / 2;
    let target = (k * k) / 2 + 1; // rank of the median, 1-based
    let clamp_col = |x: isize| -> usize { x.clamp(0, w as isize - 1) as usize };
    let mut out = vec![0u8; w * h];

    for y in 0..h {
        // Rows contributing to this output row, with edge replication.
        let rows: Vec<&[u8]> = (-(r as isize)..=r as isize)
            .map(|dy| {
                let yy = (y as isize + dy).clamp(0, h as isize - 1) as usize;
                img.row(yy)
            })
            .collect();

        let mut hist = [0u32; 256];
        for row in &rows {
            for dx in -(r as isize)..=r as isize {
                hist[row[clamp_col(dx)] as usize] += 1;
            }
        }
        // Initial median by scan.
        let mut med = 0usize;
        let mut less = 0u32; // count of samples strictly below `med`
        let mut cum = 0u32;
        for (b, &c) in hist.iter().enumerate() {
            if cum + c >= target as u32 {
                med = b;
                less = cum;
                break;
            }
            cum += c;
        }
        out[y * w] = med as u8;

        for x in 1..w {
            let rm = clamp_col(x as isize - 1 - r as isize);
            let ad = clamp_col(x as isize + r as isize);
            for row in &rows {
                let v_rm = row[rm] as usize;
                hist[v_rm] -= 1;
                if v_rm < med {
                    less -= 1;
                }
                let v_ad = row[ad] as usize;
                hist[v_ad] += 1;
                if v_ad < med {
                    less += 1;
                }
            }
            while less >= target as u32 {
                med -= 1;
                less -= hist[med];
            }
            while less + hist[med] < target as u32 {
                less += hist[med];
                med += 1;
            }
            out[y * w + x] = med as u8;
        }
    }
    GrayImage::new(w, h, out)
}

/// Marks pixels with lo <= intensity <= hi.
pub fn threshold_white(img: &GrayImage, lo: u8, hi: u8) -> Result<BinaryMask> {
    if lo > hi {
        return Err(LaneError::Parameter(format!(
            "threshold bounds inverted: lo={lo} > hi={hi}"
        )));
    }
    let data = img.data().iter().map(|&v| v >= lo && v <= hi).collect();
    BinaryMask::new(img.width(), img.height(), data)
}

/// Retains rows [floor(top_fraction * height), height).
///
/// Returns the cropped mask and the row offset needed to map detector
/// outputs back to full-frame coordinates.
pub fn crop_roi(mask: &BinaryMask, roi: RoiSpec) -> (BinaryMask, usize) {
    let first = roi.first_row(mask.height());
    let (w, h) = (mask.width(), mask.height());
    let mut data = Vec::with_capacity(w * (h - first));
    for y in first..h {
        data.extend_from_slice(mask.row(y));
    }
    (
        BinaryMask::new(w, h - first, data).expect("roi keeps at least one row"),
        first,
    )
}
