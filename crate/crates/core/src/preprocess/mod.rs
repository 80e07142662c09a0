//! Page cleanup ahead of segmentation: luminance conversion, Otsu
//! binarization, speck removal, skew estimation and correction, thinning,
//! and header-line removal.

mod otsu;
mod shirorekha;
mod skew;
mod thin;

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::raster::{label_map, BinaryImage, Connectivity, GrayImage};

pub use otsu::{otsu_threshold, ThresholdLevel};
pub use shirorekha::{remove_shirorekha, HeaderBand, ShirorekhaParams};
pub use skew::{
    estimate_skew, rotate, rotate_gray, rotate_with, Canvas, SkewEstimate, DEFAULT_SKEW_RANGE,
    DEFAULT_SKEW_STEP,
};
pub use thin::thin;

/// Interleaved 8-bit RGB raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl RgbImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyImage { width, height });
        }
        if data.len() != width * height * 3 {
            return Err(Error::DimensionMismatch {
                expected: width * height * 3,
                actual: data.len(),
            });
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }
}

/// Rec. 601 luma, rounded half-up: `round(0.299 R + 0.587 G + 0.114 B)`.
pub fn luminance(r: u8, g: u8, b: u8) -> u8 {
    let weighted = 299 * r as u32 + 587 * g as u32 + 114 * b as u32;
    ((weighted + 500) / 1000).min(255) as u8
}

pub fn grayscale(color: &RgbImage) -> GrayImage {
    let data = color
        .data
        .chunks_exact(3)
        .map(|px| luminance(px[0], px[1], px[2]))
        .collect();
    GrayImage::new(color.width, color.height, data).expect("dimensions validated by RgbImage")
}

/// Which side of the threshold is ink.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Ink {
    /// Dark text on a light page (scanned documents).
    #[default]
    Dark,
    Light,
}

/// Threshold and invert in one step so ink comes out as 1.
pub fn binarize(img: &GrayImage, t: ThresholdLevel, ink: Ink) -> BinaryImage {
    let t = t.level();
    let data = img
        .data()
        .iter()
        .map(|&v| match ink {
            Ink::Dark => (v <= t) as u8,
            Ink::Light => (v > t) as u8,
        })
        .collect();
    BinaryImage::from_vec(img.width(), img.height(), data).expect("binary by construction")
}

/// Erase every 8-connected component with fewer than `min_area` pixels.
pub fn denoise(img: &BinaryImage, min_area: usize) -> BinaryImage {
    if min_area <= 1 {
        return img.clone();
    }
    let lab = label_map(img, Connectivity::Eight);
    let keep: Vec<bool> = core::iter::once(false)
        .chain(lab.components.iter().map(|c| c.area >= min_area))
        .collect();
    let data = lab.labels.iter().map(|&l| keep[l as usize] as u8).collect();
    BinaryImage::from_vec(img.width(), img.height(), data).expect("binary by construction")
}

/// Boundary pixels: ink with at least one 4-neighbour that is background or
/// off-image. Used only for debug dumps.
pub fn edges(img: &BinaryImage) -> BinaryImage {
    let mut out = BinaryImage::new(img.width(), img.height());
    for y in 0..img.height() {
        for x in 0..img.width() {
            if !img.is_ink(x, y) {
                continue;
            }
            let (xi, yi) = (x as isize, y as isize);
            let interior = img.get_or_zero(xi - 1, yi) != 0
                && img.get_or_zero(xi + 1, yi) != 0
                && img.get_or_zero(xi, yi - 1) != 0
                && img.get_or_zero(xi, yi + 1) != 0;
            if !interior {
                out.set(x, y, 1);
            }
        }
    }
    out
}
