//! JSON documents: `segments.json`, `manifest.json`, `report.json`, and the
//! synth page-spec file.
//!
//! Keys are emitted in declaration order and boxes are always
//! `[x, y, w, h]` in page coordinates.

use serde::{Deserialize, Serialize};

use segdoc_core::eval::{LevelReport, LineBoxes, PageBoxes, PageReport, Rounding, WordBoxes};
use segdoc_core::segment::{Provenance, SegmentParams, SegmentTree};
use segdoc_core::synth::{Manifest, ManifestGlyph, ManifestLine, ManifestWord, PageSpec};
use segdoc_core::BoundingBox;

use crate::error::CliError;

pub type BoxJson = [usize; 4];

pub fn box_json(b: &BoundingBox) -> BoxJson {
    [b.x, b.y, b.w, b.h]
}

pub fn json_box(b: &BoxJson) -> BoundingBox {
    BoundingBox::new(b[0], b[1], b[2], b[3])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageSize {
    pub w: usize,
    pub h: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsDoc {
    pub row_noise_threshold: u32,
    pub col_noise_threshold: u32,
    pub min_gap_rows: usize,
    pub min_word_gap_cols: usize,
    pub char_separator_max_count: u32,
    pub threshold: Option<u8>,
    pub denoise_min_area: Option<usize>,
    pub skew_angle: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlyphDoc {
    pub bbox: BoxJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordDoc {
    pub bbox: BoxJson,
    pub glyphs: Vec<GlyphDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineDoc {
    pub bbox: BoxJson,
    pub words: Vec<WordDoc>,
}

/// `segments.json`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentsDoc {
    pub page: PageSize,
    pub params: ParamsDoc,
    pub lines: Vec<LineDoc>,
}

impl From<&SegmentTree> for SegmentsDoc {
    fn from(tree: &SegmentTree) -> Self {
        let p = &tree.params;
        let prov = &tree.provenance;
        SegmentsDoc {
            page: PageSize {
                w: tree.width,
                h: tree.height,
            },
            params: ParamsDoc {
                row_noise_threshold: p.row_noise_threshold,
                col_noise_threshold: p.col_noise_threshold,
                min_gap_rows: p.min_gap_rows,
                min_word_gap_cols: p.min_word_gap_cols,
                char_separator_max_count: p.char_separator_max_count,
                threshold: prov.threshold,
                denoise_min_area: prov.denoise_min_area,
                skew_angle: prov.deskew_angle,
            },
            lines: tree
                .lines
                .iter()
                .map(|l| LineDoc {
                    bbox: box_json(&l.line.bbox),
                    words: l
                        .words
                        .iter()
                        .map(|w| WordDoc {
                            bbox: box_json(&w.word.bbox),
                            glyphs: w
                                .glyphs
                                .iter()
                                .map(|g| GlyphDoc {
                                    bbox: box_json(&g.bbox),
                                })
                                .collect(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

impl SegmentsDoc {
    pub fn segment_params(&self) -> SegmentParams {
        SegmentParams {
            row_noise_threshold: self.params.row_noise_threshold,
            col_noise_threshold: self.params.col_noise_threshold,
            min_gap_rows: self.params.min_gap_rows,
            min_word_gap_cols: self.params.min_word_gap_cols,
            char_separator_max_count: self.params.char_separator_max_count,
        }
    }

    pub fn provenance(&self) -> Provenance {
        Provenance {
            threshold: self.params.threshold,
            denoise_min_area: self.params.denoise_min_area,
            deskew_angle: self.params.skew_angle,
        }
    }

    pub fn to_page_boxes(&self) -> PageBoxes {
        PageBoxes {
            width: self.page.w,
            height: self.page.h,
            lines: self
                .lines
                .iter()
                .map(|l| LineBoxes {
                    bbox: json_box(&l.bbox),
                    words: l
                        .words
                        .iter()
                        .map(|w| WordBoxes {
                            bbox: json_box(&w.bbox),
                            glyphs: w.glyphs.iter().map(|g| json_box(&g.bbox)).collect(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        validate_boxes(&self.to_page_boxes())
    }
}

fn validate_boxes(pb: &PageBoxes) -> Result<(), CliError> {
    let all = pb.lines.iter().flat_map(|l| {
        std::iter::once(l.bbox).chain(
            l.words
                .iter()
                .flat_map(|w| std::iter::once(w.bbox).chain(w.glyphs.iter().copied())),
        )
    });
    for b in all {
        if !b.fits_within(pb.width, pb.height) {
            return Err(CliError::SchemaMismatch(format!(
                "box {:?} is empty or outside the {}x{} page",
                box_json(&b),
                pb.width,
                pb.height
            )));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestGlyphDoc {
    pub bbox: BoxJson,
    pub detached_bar: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestWordDoc {
    pub bbox: BoxJson,
    pub digit: bool,
    pub glyphs: Vec<ManifestGlyphDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestLineDoc {
    pub bbox: BoxJson,
    pub words: Vec<ManifestWordDoc>,
}

/// `manifest.json`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestDoc {
    pub page: PageSize,
    pub seed: u64,
    pub skew_angle: f64,
    pub specks: Vec<[usize; 2]>,
    pub lines: Vec<ManifestLineDoc>,
}

impl From<&Manifest> for ManifestDoc {
    fn from(m: &Manifest) -> Self {
        ManifestDoc {
            page: PageSize {
                w: m.width,
                h: m.height,
            },
            seed: m.seed,
            skew_angle: m.skew_angle,
            specks: m.specks.iter().map(|&(x, y)| [x, y]).collect(),
            lines: m
                .lines
                .iter()
                .map(|l| ManifestLineDoc {
                    bbox: box_json(&l.bbox),
                    words: l
                        .words
                        .iter()
                        .map(|w| ManifestWordDoc {
                            bbox: box_json(&w.bbox),
                            digit: w.digit,
                            glyphs: w
                                .glyphs
                                .iter()
                                .map(|g| ManifestGlyphDoc {
                                    bbox: box_json(&g.bbox),
                                    detached_bar: g.detached_bar,
                                })
                                .collect(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

impl From<&ManifestDoc> for Manifest {
    fn from(d: &ManifestDoc) -> Self {
        Manifest {
            width: d.page.w,
            height: d.page.h,
            seed: d.seed,
            skew_angle: d.skew_angle,
            specks: d.specks.iter().map(|s| (s[0], s[1])).collect(),
            lines: d
                .lines
                .iter()
                .map(|l| ManifestLine {
                    bbox: json_box(&l.bbox),
                    words: l
                        .words
                        .iter()
                        .map(|w| ManifestWord {
                            bbox: json_box(&w.bbox),
                            digit: w.digit,
                            glyphs: w
                                .glyphs
                                .iter()
                                .map(|g| ManifestGlyph {
                                    bbox: json_box(&g.bbox),
                                    detached_bar: g.detached_bar,
                                })
                                .collect(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

impl ManifestDoc {
    pub fn validate(&self) -> Result<(), CliError> {
        validate_boxes(&Manifest::from(self).to_page_boxes())
    }
}

/// Synth spec file. Missing keys take the generator defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PageSpecDoc {
    pub seed: u64,
    pub width: usize,
    pub height: usize,
    pub margin: usize,
    pub line_count: usize,
    pub words_per_line: [usize; 2],
    pub glyphs_per_word: [usize; 2],
    pub glyph_width: [usize; 2],
    pub glyph_height: [usize; 2],
    pub stroke_width: [usize; 2],
    pub header_thickness: usize,
    pub line_gap: [usize; 2],
    pub word_gap: [usize; 2],
    pub glyph_gap: [usize; 2],
    pub digit_word_probability: f64,
    pub detached_bar_probability: f64,
    pub skew_angle: f64,
    pub noise_speck_count: usize,
}

impl Default for PageSpecDoc {
    fn default() -> Self {
        (&PageSpec::default()).into()
    }
}

fn pair(r: (usize, usize)) -> [usize; 2] {
    [r.0, r.1]
}

fn range(p: [usize; 2]) -> (usize, usize) {
    (p[0], p[1])
}

impl From<&PageSpec> for PageSpecDoc {
    fn from(s: &PageSpec) -> Self {
        PageSpecDoc {
            seed: s.seed,
            width: s.width,
            height: s.height,
            margin: s.margin,
            line_count: s.line_count,
            words_per_line: pair(s.words_per_line),
            glyphs_per_word: pair(s.glyphs_per_word),
            glyph_width: pair(s.glyph_width),
            glyph_height: pair(s.glyph_height),
            stroke_width: pair(s.stroke_width),
            header_thickness: s.header_thickness,
            line_gap: pair(s.line_gap),
            word_gap: pair(s.word_gap),
            glyph_gap: pair(s.glyph_gap),
            digit_word_probability: s.digit_word_probability,
            detached_bar_probability: s.detached_bar_probability,
            skew_angle: s.skew_angle,
            noise_speck_count: s.noise_speck_count,
        }
    }
}

impl From<&PageSpecDoc> for PageSpec {
    fn from(d: &PageSpecDoc) -> Self {
        PageSpec {
            seed: d.seed,
            width: d.width,
            height: d.height,
            margin: d.margin,
            line_count: d.line_count,
            words_per_line: range(d.words_per_line),
            glyphs_per_word: range(d.glyphs_per_word),
            glyph_width: range(d.glyph_width),
            glyph_height: range(d.glyph_height),
            stroke_width: range(d.stroke_width),
            header_thickness: d.header_thickness,
            line_gap: range(d.line_gap),
            word_gap: range(d.word_gap),
            glyph_gap: range(d.glyph_gap),
            digit_word_probability: d.digit_word_probability,
            detached_bar_probability: d.detached_bar_probability,
            skew_angle: d.skew_angle,
            noise_speck_count: d.noise_speck_count,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelDoc {
    pub level: String,
    pub present: u64,
    pub recognized: u64,
    pub accuracy_percent: f64,
    pub display: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxMatchDoc {
    pub level: String,
    pub matched: usize,
    pub over_segmented: usize,
    pub under_segmented: usize,
    pub iou_threshold: f64,
}

/// `report.json`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDoc {
    pub rounding: String,
    pub levels: Vec<LevelDoc>,
    pub boxes: Vec<BoxMatchDoc>,
}

pub fn rounding_name(r: Rounding) -> &'static str {
    match r {
        Rounding::Truncate => "truncate",
        Rounding::HalfUp => "half-up",
        Rounding::Exact => "exact",
    }
}

impl ReportDoc {
    pub fn new(report: &PageReport, rounding: Rounding) -> Self {
        let level_doc = |l: &LevelReport| LevelDoc {
            level: l.level.name().to_string(),
            present: l.present,
            recognized: l.recognized,
            accuracy_percent: l.accuracy_percent(),
            display: l.accuracy.display(rounding),
        };
        ReportDoc {
            rounding: rounding_name(rounding).to_string(),
            levels: report.levels.iter().map(level_doc).collect(),
            boxes: report
                .boxes
                .iter()
                .map(|(level, b)| BoxMatchDoc {
                    level: level.name().to_string(),
                    matched: b.matched,
                    over_segmented: b.over_segmented,
                    under_segmented: b.under_segmented,
                    iou_threshold: b.iou_threshold,
                })
                .collect(),
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents always serialize");
    s.push('\n');
    s
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::SchemaMismatch(format!("{what}: {e}")))
}
