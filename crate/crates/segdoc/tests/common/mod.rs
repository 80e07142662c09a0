//! Fixtures and brute-force oracles shared by the integration targets.
#![allow(dead_code)]

use std::collections::HashMap;
use std::path::Path;
use std::process::{Command, Output};

use rand::Rng;
use segdoc::schema::{
    GlyphDoc, LineDoc, ManifestDoc, ManifestGlyphDoc, ManifestLineDoc, ManifestWordDoc, PageSize,
    ParamsDoc, SegmentsDoc, WordDoc,
};
use segdoc_core::{BinaryImage, BoundingBox, GrayImage};

pub fn segdoc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_segdoc"))
        .args(args)
        .output()
        .expect("spawn segdoc")
}

pub fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 temp path")
}

pub fn random_gray(rng: &mut impl Rng, max: usize) -> GrayImage {
    let (w, h) = (rng.gen_range(1..=max), rng.gen_range(1..=max));
    // Half the images are bimodal so the threshold has something to find.
    let data = if rng.gen_bool(0.5) {
        (0..w * h).map(|_| rng.gen()).collect()
    } else {
        let (a, b) = (rng.gen_range(0..128u8), rng.gen_range(128..=255u8));
        (0..w * h)
            .map(|_| {
                let centre = if rng.gen_bool(0.4) { a } else { b };
                centre
                    .saturating_add(rng.gen_range(0..30))
                    .saturating_sub(15)
            })
            .collect()
    };
    GrayImage::new(w, h, data).unwrap()
}

pub fn random_binary(rng: &mut impl Rng, max: usize) -> BinaryImage {
    let (w, h) = (rng.gen_range(1..=max), rng.gen_range(1..=max));
    let density = rng.gen_range(0.05..0.7);
    let data = (0..w * h)
        .map(|_| u8::from(rng.gen_bool(density)))
        .collect();
    BinaryImage::from_vec(w, h, data).unwrap()
}

pub const FOUR: &[(isize, isize)] = &[(1, 0), (-1, 0), (0, 1), (0, -1)];
pub const EIGHT: &[(isize, isize)] = &[
    (1, 0),
    (-1, 0),
    (0, 1),
    (0, -1),
    (1, 1),
    (1, -1),
    (-1, 1),
    (-1, -1),
];

/// Flood fill from each unvisited ink pixel in raster order.
pub fn flood_fill(img: &BinaryImage, offsets: &[(isize, isize)]) -> (Vec<u32>, u32) {
    let (w, h) = (img.width() as isize, img.height() as isize);
    let mut labels = vec![0u32; (w * h) as usize];
    let mut next = 0;
    for start in 0..(w * h) {
        if img.data()[start as usize] == 0 || labels[start as usize] != 0 {
            continue;
        }
        next += 1;
        labels[start as usize] = next;
        let mut stack = vec![(start % w, start / w)];
        while let Some((x, y)) = stack.pop() {
            for &(dx, dy) in offsets {
                let (nx, ny) = (x + dx, y + dy);
                if nx < 0 || ny < 0 || nx >= w || ny >= h {
                    continue;
                }
                let i = (ny * w + nx) as usize;
                if img.data()[i] != 0 && labels[i] == 0 {
                    labels[i] = next;
                    stack.push((nx, ny));
                }
            }
        }
    }
    (labels, next)
}

/// Same partition of pixels up to renaming of labels.
pub fn same_partition(a: &[u32], b: &[u32]) -> bool {
    let mut ab = HashMap::new();
    let mut ba = HashMap::new();
    a.len() == b.len()
        && a.iter().zip(b).all(|(&x, &y)| {
            (x == 0) == (y == 0) && *ab.entry(x).or_insert(y) == y && *ba.entry(y).or_insert(x) == x
        })
}

/// Maximize w0 * w1 * (mu0 - mu1)^2 over every cut by direct summation.
pub fn otsu_oracle(img: &GrayImage) -> Option<u8> {
    let n = img.data().len() as f64;
    let mut best: Option<(u8, f64)> = None;
    for t in 0..=255u8 {
        let (lo, hi): (Vec<u8>, Vec<u8>) = img.data().iter().partition(|&&v| v <= t);
        if lo.is_empty() || hi.is_empty() {
            continue;
        }
        let w0 = lo.len() as f64 / n;
        let w1 = hi.len() as f64 / n;
        let m0 = lo.iter().map(|&v| v as f64).sum::<f64>() / lo.len() as f64;
        let m1 = hi.iter().map(|&v| v as f64).sum::<f64>() / hi.len() as f64;
        let score = w0 * w1 * (m0 - m1) * (m0 - m1);
        // Relative slack keeps float noise from splitting exact ties.
        if best.is_none_or(|(_, s)| score > s * (1.0 + 1e-12)) {
            best = Some((t, score));
        }
    }
    best.map(|(t, _)| t)
}

/// Maximal runs of rows holding any ink, with columns tightened per run.
pub fn line_oracle(img: &BinaryImage) -> Vec<BoundingBox> {
    let has_ink = |y: usize| (0..img.width()).any(|x| img.get(x, y) == 1);
    let mut out = Vec::new();
    let mut y = 0;
    while y < img.height() {
        if !has_ink(y) {
            y += 1;
            continue;
        }
        let top = y;
        while y < img.height() && has_ink(y) {
            y += 1;
        }
        let cols: Vec<usize> = (0..img.width())
            .filter(|&x| (top..y).any(|r| img.get(x, r) == 1))
            .collect();
        let (left, right) = (cols[0], cols[cols.len() - 1]);
        out.push(BoundingBox::new(left, top, right - left + 1, y - top));
    }
    out
}

fn spread(total: usize, bins: usize) -> Vec<usize> {
    (0..bins)
        .map(|i| total / bins + usize::from(i < total % bins))
        .collect()
}

/// A segments document with the given counts per level. Boxes are laid
/// out on a grid so every one of them is valid; only the counts matter.
pub fn segments_with_counts(
    page: (usize, usize),
    lines: usize,
    words: usize,
    glyphs: usize,
) -> SegmentsDoc {
    let words_per_line = spread(words, lines);
    let mut glyphs_left = spread(glyphs, words).into_iter();
    let lines = words_per_line
        .iter()
        .enumerate()
        .map(|(l, &nw)| LineDoc {
            bbox: [0, 20 * l, page.0, 10],
            words: (0..nw)
                .map(|w| WordDoc {
                    bbox: [10 * w, 20 * l, 8, 10],
                    glyphs: (0..glyphs_left.next().unwrap())
                        .map(|_| GlyphDoc {
                            bbox: [10 * w, 20 * l, 8, 10],
                        })
                        .collect(),
                })
                .collect(),
        })
        .collect();
    SegmentsDoc {
        page: PageSize {
            w: page.0,
            h: page.1,
        },
        params: ParamsDoc {
            row_noise_threshold: 0,
            col_noise_threshold: 0,
            min_gap_rows: 1,
            min_word_gap_cols: 1,
            char_separator_max_count: 1,
            threshold: None,
            denoise_min_area: None,
            skew_angle: None,
        },
        lines,
    }
}

pub fn manifest_with_counts(
    page: (usize, usize),
    lines: usize,
    words: usize,
    glyphs: usize,
) -> ManifestDoc {
    let seg = segments_with_counts(page, lines, words, glyphs);
    ManifestDoc {
        page: seg.page,
        seed: 0,
        skew_angle: 0.0,
        specks: Vec::new(),
        lines: seg
            .lines
            .iter()
            .map(|l| ManifestLineDoc {
                bbox: l.bbox,
                words: l
                    .words
                    .iter()
                    .map(|w| ManifestWordDoc {
                        bbox: w.bbox,
                        digit: false,
                        glyphs: w
                            .glyphs
                            .iter()
                            .map(|g| ManifestGlyphDoc {
                                bbox: g.bbox,
                                detached_bar: false,
                            })
                            .collect(),
                    })
                    .collect(),
            })
            .collect(),
    }
}
