//! Projection-based skew estimation and nearest-neighbour rotation.
//!
//! Angles are in degrees; positive means the page content is tilted
//! counter-clockwise as displayed (y grows downward).

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::raster::{BinaryImage, GrayImage};

pub const DEFAULT_SKEW_RANGE: (f64, f64) = (-10.0, 10.0);
pub const DEFAULT_SKEW_STEP: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkewEstimate {
    pub angle: f64,
    /// Sum of squared row-profile counts after undoing `angle`.
    pub score: u64,
    pub search_range: (f64, f64),
    pub step: f64,
}

/// `(sin, cos)` of an angle in degrees, exact at multiples of 90.
fn sin_cos(angle_deg: f64) -> (f64, f64) {
    let quarter = angle_deg / 90.0;
    if quarter == libm::round(quarter) {
        match (quarter as i64).rem_euclid(4) {
            0 => (0.0, 1.0),
            1 => (1.0, 0.0),
            2 => (0.0, -1.0),
            _ => (-1.0, 0.0),
        }
    } else {
        let r = angle_deg.to_radians();
        (libm::sin(r), libm::cos(r))
    }
}

fn candidate_angles(range: (f64, f64), step: f64) -> Vec<f64> {
    let span = range.1 - range.0;
    let n = libm::floor(span / step + 1e-9) as usize;
    (0..=n)
        .map(|i| {
            let a = range.0 + i as f64 * step;
            if a.abs() < step * 1e-6 {
                0.0
            } else {
                a
            }
        })
        .collect()
}

/// Ink positions grouped by row.
struct InkRows {
    xs: Vec<u32>,
    row_start: Vec<usize>,
}

impl InkRows {
    fn new(img: &BinaryImage) -> Self {
        let mut xs = Vec::new();
        let mut row_start = Vec::with_capacity(img.height() + 1);
        for row in img.data().chunks_exact(img.width().max(1)) {
            row_start.push(xs.len());
            xs.extend(
                row.iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0)
                    .map(|(x, _)| x as u32),
            );
        }
        row_start.resize(img.height() + 1, xs.len());
        Self { xs, row_start }
    }
}

/// Score one candidate: undo a tilt of `angle` and sum squared row counts.
fn profile_energy(img: &BinaryImage, ink: &InkRows, angle: f64, hist: &mut Vec<u64>) -> u64 {
    let (w, h) = (img.width() as f64, img.height() as f64);
    // Undoing a CCW tilt of `angle` sends (dx, dy) to row dx*sin + dy*cos.
    let (s, c) = sin_cos(angle);
    let reach = libm::ceil(libm::sqrt(w * w + h * h) / 2.0) + 1.0;
    let bins = 2 * reach as usize + 1;
    hist.clear();
    hist.resize(bins, 0);

    let col_term: Vec<f64> = (0..img.width())
        .map(|x| (x as f64 + 0.5 - w / 2.0) * s)
        .collect();
    for y in 0..img.height() {
        let xs = &ink.xs[ink.row_start[y]..ink.row_start[y + 1]];
        if xs.is_empty() {
            continue;
        }
        let base = (y as f64 + 0.5 - h / 2.0) * c + reach;
        for &x in xs {
            let bin = libm::floor(base + col_term[x as usize]) as usize;
            hist[bin] += 1;
        }
    }
    hist.iter().map(|&n| n * n).sum()
}

/// Grid search over `range` at `step`, maximizing the sum of squared row
/// counts. Ties go to the smallest `|angle|`, then the smaller angle.
pub fn estimate_skew(img: &BinaryImage, range: (f64, f64), step: f64) -> Result<SkewEstimate> {
    if !step.is_finite() || step <= 0.0 {
        return Err(Error::InvalidParameter("skew step must be positive"));
    }
    if range.0.is_nan() || range.1.is_nan() || range.0 > range.1 {
        return Err(Error::InvalidParameter(
            "skew range must satisfy min <= max",
        ));
    }
    if img.is_blank() {
        return Err(Error::BlankImage);
    }
    let ink = InkRows::new(img);
    let mut hist = Vec::new();
    let mut best: Option<(f64, u64)> = None;
    for angle in candidate_angles(range, step) {
        let score = profile_energy(img, &ink, angle, &mut hist);
        let better = match best {
            None => true,
            Some((a, s)) => score > s || (score == s && (angle.abs(), angle) < (a.abs(), a)),
        };
        if better {
            best = Some((angle, score));
        }
    }
    let (angle, score) = best.expect("grid has at least one candidate");
    Ok(SkewEstimate {
        angle,
        score,
        search_range: range,
        step,
    })
}

/// Output canvas for a rotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Canvas {
    /// Grow to hold the whole rotated source.
    Expand,
    /// Keep the source dimensions; corners may be clipped.
    Keep,
}

fn expanded_extent(w: usize, h: usize, s: f64, c: f64) -> (usize, usize) {
    let ew = w as f64 * c.abs() + h as f64 * s.abs();
    let eh = w as f64 * s.abs() + h as f64 * c.abs();
    // Matching parity keeps the centres on the same sub-pixel phase.
    let fit = |ext: f64, parity: usize| {
        let mut n = libm::ceil(ext - 1e-6).max(1.0) as usize;
        if n % 2 != parity % 2 {
            n += 1;
        }
        n
    };
    (fit(ew, w), fit(eh, h))
}

fn rotate_plane(
    src: &[u8],
    w: usize,
    h: usize,
    angle: f64,
    canvas: Canvas,
    fill: u8,
) -> (usize, usize, Vec<u8>) {
    let (s, c) = sin_cos(angle);
    let (ow, oh) = match canvas {
        Canvas::Keep => (w, h),
        Canvas::Expand => expanded_extent(w, h, s, c),
    };
    let mut out = vec![fill; ow * oh];
    let (sw, sh) = (w as f64 / 2.0, h as f64 / 2.0);
    let (cw, ch) = (ow as f64 / 2.0, oh as f64 / 2.0);
    for oy in 0..oh {
        let py = oy as f64 + 0.5 - ch;
        for ox in 0..ow {
            let px = ox as f64 + 0.5 - cw;
            let sx = libm::floor(c * px - s * py + sw);
            let sy = libm::floor(s * px + c * py + sh);
            if sx >= 0.0 && sy >= 0.0 && (sx as usize) < w && (sy as usize) < h {
                out[oy * ow + ox] = src[sy as usize * w + sx as usize];
            }
        }
    }
    (ow, oh, out)
}

/// Rotate counter-clockwise by `angle` degrees about the image centre with
/// nearest-neighbour inverse mapping; the canvas grows to fit.
pub fn rotate(img: &BinaryImage, angle: f64) -> BinaryImage {
    rotate_with(img, angle, Canvas::Expand)
}

pub fn rotate_with(img: &BinaryImage, angle: f64, canvas: Canvas) -> BinaryImage {
    if angle == 0.0 {
        return img.clone();
    }
    let (w, h, data) = rotate_plane(img.data(), img.width(), img.height(), angle, canvas, 0);
    BinaryImage::from_vec(w, h, data).expect("rotation preserves pixel domain")
}

/// Grayscale counterpart of [`rotate_with`]; uncovered pixels take `fill`.
pub fn rotate_gray(img: &GrayImage, angle: f64, canvas: Canvas, fill: u8) -> GrayImage {
    if angle == 0.0 {
        return img.clone();
    }
    let (w, h, data) = rotate_plane(img.data(), img.width(), img.height(), angle, canvas, fill);
    GrayImage::new(w, h, data).expect("non-empty canvas")
}
