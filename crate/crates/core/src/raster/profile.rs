use alloc::vec;
use alloc::vec::Vec;

use super::BinaryImage;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Rows,
    Columns,
}

/// Ink-pixel count per row or per column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectionProfile {
    pub axis: Axis,
    pub counts: Vec<u32>,
}

impl ProjectionProfile {
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }
}

/// Horizontal histogram: `counts[y]` = ink pixels in row `y`.
pub fn row_profile(img: &BinaryImage) -> ProjectionProfile {
    let w = img.width();
    let counts = if w == 0 {
        vec![0; img.height()]
    } else {
        img.data()
            .chunks_exact(w)
            .map(|row| row.iter().map(|&v| v as u32).sum())
            .collect()
    };
    ProjectionProfile {
        axis: Axis::Rows,
        counts,
    }
}

/// Vertical histogram: `counts[x]` = ink pixels in column `x`.
pub fn col_profile(img: &BinaryImage) -> ProjectionProfile {
    let w = img.width();
    let mut counts = vec![0u32; w];
    if w > 0 {
        for row in img.data().chunks_exact(w) {
            for (c, &v) in counts.iter_mut().zip(row) {
                *c += v as u32;
            }
        }
    }
    ProjectionProfile {
        axis: Axis::Columns,
        counts,
    }
}
