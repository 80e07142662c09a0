//! Line, word and character segmentation from projection profiles.
//!
//! Lines are maximal runs of rows that hold ink; words are maximal runs of
//! columns that hold ink inside a line; characters are runs of columns whose
//! thinned word profile exceeds one pixel, so columns crossed only by the
//! (thinned) header line separate glyphs.

use alloc::vec::Vec;

use crate::preprocess::thin;
use crate::raster::{col_profile, row_profile, BinaryImage, BoundingBox};

/// The thresholds behind "no white pixel" and "single white pixel".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SegmentParams {
    /// Rows with at most this many ink pixels count as blank.
    pub row_noise_threshold: u32,
    /// Columns with at most this many ink pixels count as blank.
    pub col_noise_threshold: u32,
    /// Text bands separated by fewer blank rows than this are merged.
    pub min_gap_rows: usize,
    /// Word spans separated by fewer blank columns than this are merged.
    pub min_word_gap_cols: usize,
    /// Columns of the thinned word with at most this many pixels split glyphs.
    pub char_separator_max_count: u32,
}

impl Default for SegmentParams {
    fn default() -> Self {
        Self {
            row_noise_threshold: 0,
            col_noise_threshold: 0,
            min_gap_rows: 1,
            min_word_gap_cols: 1,
            char_separator_max_count: 1,
        }
    }
}

/// Half-open index ranges `[start, end)` of profile entries above
/// `threshold`, merging runs split by fewer than `min_gap` entries.
pub fn find_runs(counts: &[u32], threshold: u32, min_gap: usize) -> Vec<(usize, usize)> {
    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut start = None;
    for (i, &c) in counts.iter().enumerate() {
        match (c > threshold, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                runs.push((s, i));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        runs.push((s, counts.len()));
    }
    let mut merged: Vec<(usize, usize)> = Vec::with_capacity(runs.len());
    for run in runs {
        match merged.last_mut() {
            Some(last) if run.0 - last.1 < min_gap => last.1 = run.1,
            _ => merged.push(run),
        }
    }
    merged
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineSegment {
    /// Page coordinates.
    pub bbox: BoundingBox,
    pub image: BinaryImage,
    /// Reading order from the top, starting at 0.
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordSegment {
    /// Page coordinates.
    pub bbox: BoundingBox,
    pub image: BinaryImage,
    pub line_index: usize,
    /// Left-to-right order within the line.
    pub index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlyphSegment {
    /// Page coordinates.
    pub bbox: BoundingBox,
    pub image: BinaryImage,
    pub word_index: usize,
    /// Left-to-right order within the word.
    pub index: usize,
}

/// Split a page into text lines at blank rows.
pub fn segment_lines(page: &BinaryImage, p: &SegmentParams) -> Vec<LineSegment> {
    let rows = row_profile(page);
    find_runs(&rows.counts, p.row_noise_threshold, p.min_gap_rows)
        .into_iter()
        .filter_map(|(y0, y1)| page.ink_bbox_in(&BoundingBox::new(0, y0, page.width(), y1 - y0)))
        .enumerate()
        .map(|(index, bbox)| LineSegment {
            image: page.crop(&bbox).expect("ink box lies inside the page"),
            bbox,
            index,
        })
        .collect()
}

/// Split a line into words at blank columns.
pub fn segment_words(line: &LineSegment, p: &SegmentParams) -> Vec<WordSegment> {
    let img = &line.image;
    let cols = col_profile(img);
    find_runs(&cols.counts, p.col_noise_threshold, p.min_word_gap_cols)
        .into_iter()
        .filter_map(|(x0, x1)| img.ink_bbox_in(&BoundingBox::new(x0, 0, x1 - x0, img.height())))
        .enumerate()
        .map(|(index, local)| WordSegment {
            image: img.crop(&local).expect("ink box lies inside the line"),
            bbox: local.offset(line.bbox.x, line.bbox.y),
            line_index: line.index,
            index,
        })
        .collect()
}

/// Split a word into glyphs at columns where the thinned word carries at
/// most `char_separator_max_count` pixels. Boxes come from the original
/// (unthinned) word so crops keep full strokes.
pub fn segment_chars(word: &WordSegment, p: &SegmentParams) -> Vec<GlyphSegment> {
    let img = &word.image;
    let skeleton = thin(img);
    let cols = col_profile(&skeleton);
    find_runs(&cols.counts, p.char_separator_max_count, 1)
        .into_iter()
        .filter_map(|(x0, x1)| img.ink_bbox_in(&BoundingBox::new(x0, 0, x1 - x0, img.height())))
        .enumerate()
        .map(|(index, local)| GlyphSegment {
            image: img.crop(&local).expect("ink box lies inside the word"),
            bbox: local.offset(word.bbox.x, word.bbox.y),
            word_index: word.index,
            index,
        })
        .collect()
}

/// Preprocessing settings that produced the page, carried for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Provenance {
    pub threshold: Option<u8>,
    pub denoise_min_area: Option<usize>,
    pub deskew_angle: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WordNode {
    pub word: WordSegment,
    pub glyphs: Vec<GlyphSegment>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineNode {
    pub line: LineSegment,
    pub words: Vec<WordNode>,
}

/// Page -> lines -> words -> glyphs, in reading order.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentTree {
    pub width: usize,
    pub height: usize,
    pub params: SegmentParams,
    pub provenance: Provenance,
    pub lines: Vec<LineNode>,
}

impl SegmentTree {
    pub fn line_count(&self) -> usize {
        self.lines.len()
    }

    pub fn word_count(&self) -> usize {
        self.lines.iter().map(|l| l.words.len()).sum()
    }

    pub fn glyph_count(&self) -> usize {
        self.lines
            .iter()
            .flat_map(|l| &l.words)
            .map(|w| w.glyphs.len())
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }
}

pub fn segment_page(page: &BinaryImage, p: &SegmentParams) -> SegmentTree {
    let lines = segment_lines(page, p)
        .into_iter()
        .map(|line| {
            let words = segment_words(&line, p)
                .into_iter()
                .map(|word| WordNode {
                    glyphs: segment_chars(&word, p),
                    word,
                })
                .collect();
            LineNode { line, words }
        })
        .collect();
    SegmentTree {
        width: page.width(),
        height: page.height(),
        params: *p,
        provenance: Provenance::default(),
        lines,
    }
}
