//! Deterministic synthetic pages with exact ground truth.
//!
//! Each non-digit word is a row of connected glyph bodies hanging from one
//! header band (the shirorekha) that spans the whole word. Digit words have
//! no header, so their glyphs are disconnected. Some glyphs can carry a
//! vertical bar that touches the header but not the glyph body.

use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::eval::{LineBoxes, PageBoxes, WordBoxes};
use crate::preprocess::{rotate_with, Canvas};
use crate::raster::{BinaryImage, BoundingBox};

/// Inclusive `(min, max)` range.
pub type Range = (usize, usize);

#[derive(Debug, Clone, PartialEq)]
pub struct PageSpec {
    pub seed: u64,
    pub width: usize,
    pub height: usize,
    /// Blank border kept on every side.
    pub margin: usize,
    pub line_count: usize,
    pub words_per_line: Range,
    pub glyphs_per_word: Range,
    pub glyph_width: Range,
    /// Body height below the header.
    pub glyph_height: Range,
    pub stroke_width: Range,
    pub header_thickness: usize,
    pub line_gap: Range,
    pub word_gap: Range,
    pub glyph_gap: Range,
    pub digit_word_probability: f64,
    /// Chance that a glyph in a headed word gets a detached vertical bar.
    pub detached_bar_probability: f64,
    pub skew_angle: f64,
    pub noise_speck_count: usize,
}

impl Default for PageSpec {
    fn default() -> Self {
        Self {
            seed: 0,
            width: 800,
            height: 600,
            margin: 20,
            line_count: 6,
            words_per_line: (3, 5),
            glyphs_per_word: (2, 4),
            glyph_width: (10, 16),
            glyph_height: (14, 22),
            stroke_width: (2, 3),
            header_thickness: 3,
            line_gap: (12, 20),
            word_gap: (10, 16),
            glyph_gap: (2, 4),
            digit_word_probability: 0.0,
            detached_bar_probability: 0.0,
            skew_angle: 0.0,
            noise_speck_count: 0,
        }
    }
}

/// Blank columns between a glyph body and its detached bar.
const BAR_GAP: usize = 2;

impl PageSpec {
    fn validate(&self) -> Result<()> {
        let ranges = [
            ("words_per_line", self.words_per_line),
            ("glyphs_per_word", self.glyphs_per_word),
            ("glyph_width", self.glyph_width),
            ("glyph_height", self.glyph_height),
            ("stroke_width", self.stroke_width),
            ("line_gap", self.line_gap),
            ("word_gap", self.word_gap),
            ("glyph_gap", self.glyph_gap),
        ];
        for (name, (lo, hi)) in ranges {
            if lo > hi {
                return Err(Error::SpecInfeasible(format!(
                    "{name}: min {lo} > max {hi}"
                )));
            }
        }
        let rules = [
            (self.words_per_line.0 >= 1, "words_per_line must be >= 1"),
            (self.glyphs_per_word.0 >= 1, "glyphs_per_word must be >= 1"),
            (self.glyph_width.0 >= 3, "glyph_width must be >= 3"),
            (self.glyph_height.0 >= 3, "glyph_height must be >= 3"),
            (self.stroke_width.0 >= 1, "stroke_width must be >= 1"),
            (
                self.stroke_width.1 <= self.glyph_width.0
                    && self.stroke_width.1 <= self.glyph_height.0,
                "stroke_width must fit inside the smallest glyph",
            ),
            (self.header_thickness >= 1, "header_thickness must be >= 1"),
            (self.line_gap.0 >= 1, "line_gap must be >= 1"),
            (self.word_gap.0 >= 1, "word_gap must be >= 1"),
            (self.glyph_gap.0 >= 1, "glyph_gap must be >= 1"),
            (
                (0.0..=1.0).contains(&self.digit_word_probability),
                "digit_word_probability must lie in [0, 1]",
            ),
            (
                (0.0..=1.0).contains(&self.detached_bar_probability),
                "detached_bar_probability must lie in [0, 1]",
            ),
            (self.skew_angle.is_finite(), "skew_angle must be finite"),
        ];
        for (ok, msg) in rules {
            if !ok {
                return Err(Error::SpecInfeasible(msg.into()));
            }
        }

        // Worst case must fit, so every seed succeeds.
        let line_h = self.header_thickness + self.glyph_height.1;
        let need_h = 2 * self.margin
            + self.line_count * line_h
            + self.line_count.saturating_sub(1) * self.line_gap.1;
        if need_h > self.height {
            return Err(Error::SpecInfeasible(format!(
                "{} lines need {need_h} rows, page has {}",
                self.line_count, self.height
            )));
        }
        let glyph_w = self.glyph_width.1
            + if self.detached_bar_probability > 0.0 {
                BAR_GAP + self.stroke_width.1
            } else {
                0
            };
        let word_w =
            self.glyphs_per_word.1 * glyph_w + (self.glyphs_per_word.1 - 1) * self.glyph_gap.1;
        let need_w = 2 * self.margin
            + self.words_per_line.1 * word_w
            + (self.words_per_line.1 - 1) * self.word_gap.1;
        if need_w > self.width {
            return Err(Error::SpecInfeasible(format!(
                "widest line needs {need_w} columns, page has {}",
                self.width
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestGlyph {
    pub bbox: BoundingBox,
    pub detached_bar: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestWord {
    pub bbox: BoundingBox,
    pub digit: bool,
    pub glyphs: Vec<ManifestGlyph>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestLine {
    pub bbox: BoundingBox,
    pub words: Vec<ManifestWord>,
}

/// Ground truth captured before skew is applied. All boxes are tight ink
/// boxes in page coordinates; glyph boxes include the header rows above
/// the glyph.
#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub width: usize,
    pub height: usize,
    pub seed: u64,
    pub skew_angle: f64,
    pub specks: Vec<(usize, usize)>,
    pub lines: Vec<ManifestLine>,
}

impl Manifest {
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

    pub fn to_page_boxes(&self) -> PageBoxes {
        PageBoxes {
            width: self.width,
            height: self.height,
            lines: self
                .lines
                .iter()
                .map(|l| LineBoxes {
                    bbox: l.bbox,
                    words: l
                        .words
                        .iter()
                        .map(|w| WordBoxes {
                            bbox: w.bbox,
                            glyphs: w.glyphs.iter().map(|g| g.bbox).collect(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

fn fill(img: &mut BinaryImage, x: usize, y: usize, w: usize, h: usize) {
    for yy in y..y + h {
        for xx in x..x + w {
            img.set(xx, yy, 1);
        }
    }
}

fn pick(rng: &mut ChaCha8Rng, (lo, hi): Range) -> usize {
    rng.gen_range(lo..=hi)
}

/// Stem plus full-width bar, with up to two extra strokes hanging off
/// them. Always 8-connected and exactly fills the box's extent.
///
/// Horizontal strokes stay clear of the top so they never fuse with a
/// header; digits keep them in the lower half so no row looks like one.
fn draw_body(
    img: &mut BinaryImage,
    rng: &mut ChaCha8Rng,
    b: BoundingBox,
    stroke: usize,
    digit: bool,
) {
    let stem_x = b.x + rng.gen_range(0..=b.w - stroke);
    fill(img, stem_x, b.y, stroke, b.h);

    let lo = if digit { b.h / 2 } else { 2 * stroke + 1 }.min(b.h - stroke);
    let bar_y = b.y + rng.gen_range(lo..=b.h - stroke);
    fill(img, b.x, bar_y, b.w, stroke);

    for _ in 0..rng.gen_range(0..=2usize) {
        if rng.gen_bool(0.5) {
            // Vertical tick hanging from the bar.
            let x = b.x + rng.gen_range(0..=b.w - stroke);
            let end = b.y + b.h;
            let len = rng.gen_range(1..=end - bar_y);
            fill(img, x, bar_y, stroke, len);
        } else {
            // Horizontal arm leaving the stem toward one side.
            let y = b.y + rng.gen_range(lo..=b.h - stroke);
            if rng.gen_bool(0.5) {
                fill(img, b.x, y, stem_x + stroke - b.x, stroke);
            } else {
                fill(img, stem_x, y, b.x + b.w - stem_x, stroke);
            }
        }
    }
}

struct GlyphPlan {
    body_w: usize,
    body_h: usize,
    stroke: usize,
    bar: bool,
}

impl GlyphPlan {
    fn span(&self) -> usize {
        self.body_w + if self.bar { BAR_GAP + self.stroke } else { 0 }
    }
}

struct WordPlan {
    digit: bool,
    glyphs: Vec<GlyphPlan>,
    gaps: Vec<usize>,
}

impl WordPlan {
    fn width(&self) -> usize {
        self.glyphs.iter().map(GlyphPlan::span).sum::<usize>() + self.gaps.iter().sum::<usize>()
    }
}

/// Render a page and its manifest. Deterministic for a fixed spec.
pub fn generate(spec: &PageSpec) -> Result<(BinaryImage, Manifest)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut page = BinaryImage::new(spec.width, spec.height);
    let header = spec.header_thickness;

    let mut line_regions = Vec::with_capacity(spec.line_count);
    let mut y = spec.margin;
    for li in 0..spec.line_count {
        if li > 0 {
            y += pick(&mut rng, spec.line_gap);
        }
        let word_count = pick(&mut rng, spec.words_per_line);
        let mut words = Vec::with_capacity(word_count);
        for _ in 0..word_count {
            let digit = rng.gen_bool(spec.digit_word_probability);
            let n = pick(&mut rng, spec.glyphs_per_word);
            let glyphs: Vec<GlyphPlan> = (0..n)
                .map(|_| GlyphPlan {
                    body_w: pick(&mut rng, spec.glyph_width),
                    body_h: pick(&mut rng, spec.glyph_height),
                    stroke: pick(&mut rng, spec.stroke_width),
                    bar: !digit && rng.gen_bool(spec.detached_bar_probability),
                })
                .collect();
            let gaps = (1..n).map(|_| pick(&mut rng, spec.glyph_gap)).collect();
            words.push(WordPlan {
                digit,
                glyphs,
                gaps,
            });
        }
        let line_h = header
            + words
                .iter()
                .flat_map(|w| &w.glyphs)
                .map(|g| g.body_h)
                .max()
                .unwrap_or(0);

        let mut x = spec.margin;
        let mut word_regions = Vec::with_capacity(words.len());
        for (wi, word) in words.iter().enumerate() {
            if wi > 0 {
                x += pick(&mut rng, spec.word_gap);
            }
            let word_w = word.width();
            if !word.digit {
                fill(&mut page, x, y, word_w, header);
            }
            let mut gx = x;
            let mut glyph_regions = Vec::with_capacity(word.glyphs.len());
            for (gi, g) in word.glyphs.iter().enumerate() {
                if gi > 0 {
                    gx += word.gaps[gi - 1];
                }
                let body = if word.digit {
                    BoundingBox::new(gx, y, g.body_w, header + g.body_h)
                } else {
                    BoundingBox::new(gx, y + header, g.body_w, g.body_h)
                };
                draw_body(&mut page, &mut rng, body, g.stroke, word.digit);
                if g.bar {
                    fill(
                        &mut page,
                        gx + g.body_w + BAR_GAP,
                        y + header,
                        g.stroke,
                        g.body_h,
                    );
                }
                glyph_regions.push((BoundingBox::new(gx, y, g.span(), line_h), g.bar));
                gx += g.span();
            }
            word_regions.push((
                BoundingBox::new(x, y, word_w, line_h),
                word.digit,
                glyph_regions,
            ));
            x += word_w;
        }
        line_regions.push((BoundingBox::new(0, y, spec.width, line_h), word_regions));
        y += line_h;
    }

    let tight = |page: &BinaryImage, region: &BoundingBox| {
        page.ink_bbox_in(region).expect("every region holds ink")
    };
    let lines = line_regions
        .iter()
        .map(|(region, words)| ManifestLine {
            bbox: tight(&page, region),
            words: words
                .iter()
                .map(|(region, digit, glyphs)| ManifestWord {
                    bbox: tight(&page, region),
                    digit: *digit,
                    glyphs: glyphs
                        .iter()
                        .map(|(region, bar)| ManifestGlyph {
                            bbox: tight(&page, region),
                            detached_bar: *bar,
                        })
                        .collect(),
                })
                .collect(),
        })
        .collect();

    let specks = scatter_specks(&mut page, &mut rng, spec)?;

    let manifest = Manifest {
        width: spec.width,
        height: spec.height,
        seed: spec.seed,
        skew_angle: spec.skew_angle,
        specks,
        lines,
    };
    if spec.skew_angle != 0.0 {
        page = rotate_with(&page, spec.skew_angle, Canvas::Keep);
    }
    Ok((page, manifest))
}

/// Isolated single pixels that touch neither ink nor each other.
fn scatter_specks(
    page: &mut BinaryImage,
    rng: &mut ChaCha8Rng,
    spec: &PageSpec,
) -> Result<Vec<(usize, usize)>> {
    let mut specks = Vec::with_capacity(spec.noise_speck_count);
    let max_attempts = 1000 * spec.noise_speck_count.max(1);
    let mut attempts = 0;
    while specks.len() < spec.noise_speck_count {
        attempts += 1;
        if attempts > max_attempts {
            return Err(Error::SpecInfeasible(format!(
                "could not place {} isolated specks",
                spec.noise_speck_count
            )));
        }
        let x = rng.gen_range(0..spec.width);
        let y = rng.gen_range(0..spec.height);
        let clear = (-1isize..=1).all(|dy| {
            (-1isize..=1).all(|dx| page.get_or_zero(x as isize + dx, y as isize + dy) == 0)
        });
        if clear {
            page.set(x, y, 1);
            specks.push((x, y));
        }
    }
    Ok(specks)
}
