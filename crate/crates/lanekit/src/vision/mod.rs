//! Raster types and classical feature primitives for the lane pipeline.
//!
//! Shared pixel conventions: x grows rightward, y downward, origin at the
//! top-left, pixel centers at integer coordinates. All neighborhood
//! operations replicate edge pixels at the borders.

mod canny;
mod contour;
mod filter;
mod homography;
mod hough;
mod image;
mod pgm;

pub use canny::{canny, canny_with_sigma, DEFAULT_CANNY_SIGMA};
pub use contour::{contour_area, contour_centroid, find_contours, Contour};
pub use filter::{crop_roi, median_blur, threshold_white, to_grayscale};
pub use homography::Homography;
pub use hough::{hough_segments, HoughParams, LineSegment};
pub use image::{BinaryMask, GrayImage, RgbImage, RoiSpec};
pub use pgm::{frame_dump_name, read_pgm_gray, write_pgm_gray, write_pgm_mask};

/// Preprocessing and feature-extraction parameters shared by the detectors.
#[derive(Debug, Clone)]
pub struct VisionConfig {
    /// Median blur kernel size (odd).
    pub median_k: usize,
    /// Lower bound of the white-pixel threshold.
    pub threshold_lo: u8,
    /// Upper bound of the white-pixel threshold.
    pub threshold_hi: u8,
    /// Fraction of rows removed from the top of the frame.
    pub roi_top_fraction: f64,
    /// Canny hysteresis thresholds in gradient-magnitude units.
    pub canny_lo: f64,
    pub canny_hi: f64,
    /// Gaussian smoothing sigma used inside Canny.
    pub canny_sigma: f64,
    pub hough: HoughParams,
}

impl Default for VisionConfig {
    fn default() -> Self {
        Self {
            median_k: 5,
            threshold_lo: 200,
            threshold_hi: 255,
            roi_top_fraction: 0.58,
            canny_lo: 60.0,
            canny_hi: 140.0,
            canny_sigma: DEFAULT_CANNY_SIGMA,
            hough: HoughParams::default(),
        }
    }
}
