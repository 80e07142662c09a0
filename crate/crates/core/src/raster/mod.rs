//! Raster containers and the primitives every other module builds on.
//!
//! Coordinates use a top-left origin with `x` growing rightward and `y`
//! downward. Pixels are stored row-major, so `pixel(x, y)` lives at
//! `data[y * width + x]`.

mod label;
mod profile;

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub use label::{label_components, label_map, Component, Connectivity, Labeling};
pub use profile::{col_profile, row_profile, Axis, ProjectionProfile};

/// Axis-aligned box; `x`/`y` inclusive, `w`/`h` at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoundingBox {
    pub x: usize,
    pub y: usize,
    pub w: usize,
    pub h: usize,
}

impl BoundingBox {
    pub const fn new(x: usize, y: usize, w: usize, h: usize) -> Self {
        Self { x, y, w, h }
    }

    /// Box spanning the inclusive corners `(x0, y0)`..=`(x1, y1)`.
    pub fn from_corners(x0: usize, y0: usize, x1: usize, y1: usize) -> Self {
        Self::new(x0, y0, x1 - x0 + 1, y1 - y0 + 1)
    }

    /// One past the rightmost column.
    pub fn right(&self) -> usize {
        self.x + self.w
    }

    /// One past the bottom row.
    pub fn bottom(&self) -> usize {
        self.y + self.h
    }

    pub fn area(&self) -> usize {
        self.w * self.h
    }

    pub fn contains(&self, other: &BoundingBox) -> bool {
        other.x >= self.x
            && other.y >= self.y
            && other.right() <= self.right()
            && other.bottom() <= self.bottom()
    }

    pub fn contains_point(&self, x: usize, y: usize) -> bool {
        x >= self.x && x < self.right() && y >= self.y && y < self.bottom()
    }

    pub fn intersection(&self, other: &BoundingBox) -> Option<BoundingBox> {
        let x0 = self.x.max(other.x);
        let y0 = self.y.max(other.y);
        let x1 = self.right().min(other.right());
        let y1 = self.bottom().min(other.bottom());
        (x0 < x1 && y0 < y1).then(|| BoundingBox::new(x0, y0, x1 - x0, y1 - y0))
    }

    /// Intersection over union; 0 for disjoint boxes.
    pub fn iou(&self, other: &BoundingBox) -> f64 {
        let inter = self.intersection(other).map_or(0, |b| b.area());
        let union = self.area() + other.area() - inter;
        if union == 0 {
            0.0
        } else {
            inter as f64 / union as f64
        }
    }

    /// Shift by a parent origin.
    pub fn offset(&self, dx: usize, dy: usize) -> BoundingBox {
        BoundingBox::new(self.x + dx, self.y + dy, self.w, self.h)
    }

    pub fn fits_within(&self, width: usize, height: usize) -> bool {
        self.w >= 1 && self.h >= 1 && self.right() <= width && self.bottom() <= height
    }

    fn check(&self, width: usize, height: usize) -> Result<()> {
        if self.fits_within(width, height) {
            Ok(())
        } else {
            Err(Error::OutOfBounds {
                x: self.x,
                y: self.y,
                w: self.w,
                h: self.h,
                width,
                height,
            })
        }
    }
}

fn crop_plane<T: Copy>(data: &[T], width: usize, bbox: &BoundingBox) -> Vec<T> {
    let mut out = Vec::with_capacity(bbox.area());
    for y in bbox.y..bbox.bottom() {
        let start = y * width + bbox.x;
        out.extend_from_slice(&data[start..start + bbox.w]);
    }
    out
}

/// 8-bit grayscale raster, 0 = black.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::EmptyImage { width, height });
        }
        if data.len() != width * height {
            return Err(Error::DimensionMismatch {
                expected: width * height,
                actual: data.len(),
            });
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: u8) {
        self.data[y * self.width + x] = value;
    }

    pub fn crop(&self, bbox: &BoundingBox) -> Result<GrayImage> {
        bbox.check(self.width, self.height)?;
        Ok(GrayImage {
            width: bbox.w,
            height: bbox.h,
            data: crop_plane(&self.data, self.width, bbox),
        })
    }
}

/// Two-level raster where 1 is ink (object) and 0 is background.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryImage {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl BinaryImage {
    /// An all-background image.
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            data: vec![0; width * height],
        }
    }

    pub fn from_vec(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if data.len() != width * height {
            return Err(Error::DimensionMismatch {
                expected: width * height,
                actual: data.len(),
            });
        }
        if let Some(index) = data.iter().position(|&v| v > 1) {
            return Err(Error::InvalidPixel {
                index,
                value: data[index],
            });
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// Build from rows of `'#'` (ink) and anything else (background).
    /// Handy for tests and small fixtures.
    pub fn from_ascii(rows: &[&str]) -> Self {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.len());
        let mut img = Self::new(width, height);
        for (y, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), width, "ragged ascii image");
            for (x, c) in row.bytes().enumerate() {
                if c == b'#' {
                    img.set(x, y, 1);
                }
            }
        }
        img
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn is_ink(&self, x: usize, y: usize) -> bool {
        self.data[y * self.width + x] != 0
    }

    /// Out-of-range coordinates read as background.
    #[inline]
    pub fn get_or_zero(&self, x: isize, y: isize) -> u8 {
        if x < 0 || y < 0 || x as usize >= self.width || y as usize >= self.height {
            0
        } else {
            self.data[y as usize * self.width + x as usize]
        }
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: u8) {
        debug_assert!(value <= 1);
        self.data[y * self.width + x] = value;
    }

    pub fn ink_count(&self) -> usize {
        self.data.iter().filter(|&&v| v != 0).count()
    }

    pub fn is_blank(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// Tight box around all ink, if any.
    pub fn ink_bbox(&self) -> Option<BoundingBox> {
        self.ink_bbox_in(&BoundingBox::new(0, 0, self.width, self.height))
    }

    /// Tight box around the ink inside `region` (page coordinates).
    pub fn ink_bbox_in(&self, region: &BoundingBox) -> Option<BoundingBox> {
        let (mut x0, mut y0, mut x1, mut y1) = (usize::MAX, usize::MAX, 0, 0);
        for y in region.y..region.bottom() {
            let row = &self.data[y * self.width..(y + 1) * self.width];
            for (x, &v) in row.iter().enumerate().take(region.right()).skip(region.x) {
                if v != 0 {
                    x0 = x0.min(x);
                    x1 = x1.max(x);
                    y0 = y0.min(y);
                    y1 = y1.max(y);
                }
            }
        }
        (x0 != usize::MAX).then(|| BoundingBox::from_corners(x0, y0, x1, y1))
    }

    /// True when every ink pixel of `self` is also ink in `other`.
    pub fn is_subset_of(&self, other: &BinaryImage) -> bool {
        self.width == other.width
            && self.height == other.height
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(&a, &b)| a == 0 || b != 0)
    }

    pub fn crop(&self, bbox: &BoundingBox) -> Result<BinaryImage> {
        bbox.check(self.width, self.height)?;
        Ok(BinaryImage {
            width: bbox.w,
            height: bbox.h,
            data: crop_plane(&self.data, self.width, bbox),
        })
    }

    pub fn transpose(&self) -> BinaryImage {
        let mut out = BinaryImage::new(self.height, self.width);
        for y in 0..self.height {
            for x in 0..self.width {
                out.data[x * self.height + y] = self.data[y * self.width + x];
            }
        }
        out
    }

    /// Render as grayscale with ink black (0) on white (255).
    pub fn to_gray(&self) -> GrayImage {
        let data = self
            .data
            .iter()
            .map(|&v| if v != 0 { 0 } else { 255 })
            .collect();
        GrayImage {
            width: self.width,
            height: self.height,
            data,
        }
    }
}

/// Pixel-wise complement.
pub fn invert(img: &BinaryImage) -> BinaryImage {
    BinaryImage {
        width: img.width,
        height: img.height,
        data: img.data.iter().map(|&v| 1 - v).collect(),
    }
}
