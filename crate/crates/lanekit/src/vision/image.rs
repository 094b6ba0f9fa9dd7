//! Frame buffer types: grayscale, binary mask, interleaved RGB.

use crate::error::{LaneError, Result};

/// Single-channel 8-bit raster, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(LaneError::Dimension(format!(
                "image dimensions must be >= 1, got {width}x{height}"
            )));
        }
        if data.len() != width * height {
            return Err(LaneError::Dimension(format!(
                "data length {} does not match {width}x{height}",
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be >= 1");
        Self {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: u8) {
        self.data[y * self.width + x] = v;
    }

    #[inline]
    pub fn row(&self, y: usize) -> &[u8] {
        &self.data[y * self.width..(y + 1) * self.width]
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [u8] {
        &mut self.data
    }

    pub fn flip_horizontal(&self) -> GrayImage {
        let mut out = self.clone();
        for y in 0..self.height {
            out.data[y * self.width..(y + 1) * self.width].reverse();
        }
        out
    }
}

/// Per-pixel boolean raster with the same dimension rules as [`GrayImage`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    data: Vec<bool>,
}

impl BinaryMask {
    pub fn new(width: usize, height: usize, data: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(LaneError::Dimension(format!(
                "mask dimensions must be >= 1, got {width}x{height}"
            )));
        }
        if data.len() != width * height {
            return Err(LaneError::Dimension(format!(
                "data length {} does not match {width}x{height}",
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, value: bool) -> Self {
        assert!(width > 0 && height > 0, "mask dimensions must be >= 1");
        Self {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> bool {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, v: bool) {
        self.data[y * self.width + x] = v;
    }

    #[inline]
    pub fn row(&self, y: usize) -> &[bool] {
        &self.data[y * self.width..(y + 1) * self.width]
    }

    pub fn data(&self) -> &[bool] {
        &self.data
    }

    pub fn count_true(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    pub fn flip_horizontal(&self) -> BinaryMask {
        let mut out = self.clone();
        for y in 0..self.height {
            out.data[y * self.width..(y + 1) * self.width].reverse();
        }
        out
    }

    /// Renders the mask as a {0,255} grayscale image, the form the edge and
    /// warp stages consume.
    pub fn to_gray(&self) -> GrayImage {
        GrayImage {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&b| if b { 255 } else { 0 }).collect(),
        }
    }
}

/// Interleaved 3-channel 8-bit raster.
#[derive(Debug, Clone)]
pub struct RgbImage {
    width: usize,
    height: usize,
    data: Vec<u8>, // r,g,b interleaved
}

impl RgbImage {
    /// Builds from three equally sized channel planes.
    pub fn from_planes(r: &[u8], g: &[u8], b: &[u8], width: usize, height: usize) -> Result<Self> {
        let n = width * height;
        if width == 0 || height == 0 {
            return Err(LaneError::Dimension(format!(
                "image dimensions must be >= 1, got {width}x{height}"
            )));
        }
        if r.len() != n || g.len() != n || b.len() != n {
            return Err(LaneError::Dimension(format!(
                "channel lengths {}/{}/{} do not all match {width}x{height}",
                r.len(),
                g.len(),
                b.len()
            )));
        }
        let mut data = Vec::with_capacity(3 * n);
        for i in 0..n {
            data.push(r[i]);
            data.push(g[i]);
            data.push(b[i]);
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> (u8, u8, u8) {
        let i = 3 * (y * self.width + x);
        (self.data[i], self.data[i + 1], self.data[i + 2])
    }
}

/// Region-of-interest crop: removes a fraction of rows from the top.
#[derive(Debug, Clone, Copy)]
pub struct RoiSpec {
    top_fraction: f64,
}

impl RoiSpec {
    pub fn new(top_fraction: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&top_fraction) {
            return Err(LaneError::Parameter(format!(
                "roi top_fraction must be in [0,1), got {top_fraction}"
            )));
        }
        Ok(Self { top_fraction })
    }

    pub fn top_fraction(&self) -> f64 {
        self.top_fraction
    }

    /// First retained row for a frame of the given height.
    pub fn first_row(&self, height: usize) -> usize {
        (self.top_fraction * height as f64).floor() as usize
    }
}
