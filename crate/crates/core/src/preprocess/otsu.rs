//! Otsu's global threshold.
//!
//! Between-class variance for a cut at `t` is
//! `w0 * w1 * (mu0 - mu1)^2`, which scaled by `N^2` equals
//! `(S0 * N - S * n0)^2 / (n0 * n1)` with `n0`/`S0` the count and intensity
//! sum of pixels `<= t`. Candidates are compared as exact integer fractions,
//! so ties resolve to the lowest level regardless of rounding.

use crate::error::{Error, Result};
use crate::raster::GrayImage;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ThresholdLevel(u8);

impl ThresholdLevel {
    pub const fn new(level: u8) -> Self {
        Self(level)
    }

    pub const fn level(self) -> u8 {
        self.0
    }
}

/// Little-endian 64-bit limbs, wide enough for `(255 N^2)^2 * N^2` with
/// `N < 2^40`.
type Wide = [u64; 8];

fn wide_mul(a: &[u64], b: &[u64]) -> Wide {
    let mut out = [0u64; 8];
    for (i, &x) in a.iter().enumerate() {
        let mut carry = 0u128;
        for (j, &y) in b.iter().enumerate() {
            let k = i + j;
            let t = out[k] as u128 + x as u128 * y as u128 + carry;
            out[k] = t as u64;
            carry = t >> 64;
        }
        let mut k = i + b.len();
        while carry != 0 {
            let t = out[k] as u128 + carry;
            out[k] = t as u64;
            carry = t >> 64;
            k += 1;
        }
    }
    out
}

fn limbs(v: u128) -> [u64; 2] {
    [v as u64, (v >> 64) as u64]
}

fn wide_cmp(a: &Wide, b: &Wide) -> core::cmp::Ordering {
    a.iter().rev().cmp(b.iter().rev())
}

/// `num / den` with `num = x^2`; `den == 0` only when `x == 0`.
#[derive(Clone, Copy)]
struct Score {
    x: u128,
    den: u128,
}

impl Score {
    fn greater_than(&self, other: &Score) -> bool {
        // x_a^2 * den_b > x_b^2 * den_a
        let xa = limbs(self.x);
        let xb = limbs(other.x);
        let lhs = wide_mul(&wide_mul(&xa, &xa)[..4], &limbs(other.den));
        let rhs = wide_mul(&wide_mul(&xb, &xb)[..4], &limbs(self.den));
        wide_cmp(&lhs, &rhs) == core::cmp::Ordering::Greater
    }
}

pub fn otsu_threshold(img: &GrayImage) -> Result<ThresholdLevel> {
    let mut hist = [0u64; 256];
    for &v in img.data() {
        hist[v as usize] += 1;
    }
    let occupied = hist.iter().filter(|&&c| c > 0).count();
    if occupied <= 1 {
        let v = hist.iter().position(|&c| c > 0).unwrap_or(0) as u8;
        return Err(Error::DegenerateHistogram(v));
    }

    let n = img.data().len() as u128;
    let sum: u128 = hist
        .iter()
        .enumerate()
        .map(|(i, &c)| i as u128 * c as u128)
        .sum();

    let mut n0 = 0u128;
    let mut s0 = 0u128;
    let mut best: Option<(u8, Score)> = None;
    for (t, &c) in hist.iter().enumerate() {
        n0 += c as u128;
        s0 += t as u128 * c as u128;
        let n1 = n - n0;
        let score = if n0 == 0 || n1 == 0 {
            Score { x: 0, den: 1 }
        } else {
            let a = s0 * n;
            let b = sum * n0;
            Score {
                x: a.abs_diff(b),
                den: n0 * n1,
            }
        };
        match &best {
            Some((_, b)) if !score.greater_than(b) => {}
            _ => best = Some((t as u8, score)),
        }
    }
    Ok(ThresholdLevel(best.map_or(0, |(t, _)| t)))
}
