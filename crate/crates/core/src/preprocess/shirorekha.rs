//! Header-line (shirorekha) removal for a single word image.

use crate::error::{Error, Result};
use crate::raster::{row_profile, BinaryImage};

/// Detection constants; each can be varied independently.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShirorekhaParams {
    /// The peak row is searched in this top fraction of the ink extent.
    pub search_fraction: f64,
    /// Rows around the peak with at least this fraction of the peak count
    /// belong to the header band.
    pub band_ratio: f64,
    /// The peak must cover at least this fraction of the word width.
    pub min_width_fraction: f64,
}

impl Default for ShirorekhaParams {
    fn default() -> Self {
        Self {
            search_fraction: 0.4,
            band_ratio: 0.8,
            min_width_fraction: 0.5,
        }
    }
}

/// Inclusive row range of the cleared header.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeaderBand {
    pub top: usize,
    pub bottom: usize,
}

pub fn remove_shirorekha(
    word: &BinaryImage,
    params: &ShirorekhaParams,
) -> Result<(BinaryImage, HeaderBand)> {
    let ink = word.ink_bbox().ok_or(Error::BlankImage)?;
    let counts = row_profile(word).counts;

    let search_rows = ((ink.h as f64 * params.search_fraction) as usize).max(1);
    let mut peak_row = ink.y;
    for r in ink.y..ink.y + search_rows {
        if counts[r] > counts[peak_row] {
            peak_row = r;
        }
    }
    let peak = counts[peak_row] as f64;
    if peak < params.min_width_fraction * word.width() as f64 {
        return Err(Error::NoHeaderFound);
    }

    let in_band = |r: usize| counts[r] as f64 >= params.band_ratio * peak;
    let mut top = peak_row;
    while top > 0 && in_band(top - 1) {
        top -= 1;
    }
    let mut bottom = peak_row;
    while bottom + 1 < word.height() && in_band(bottom + 1) {
        bottom += 1;
    }

    let mut out = word.clone();
    for y in top..=bottom {
        for x in 0..word.width() {
            out.set(x, y, 0);
        }
    }
    Ok((out, HeaderBand { top, bottom }))
}
