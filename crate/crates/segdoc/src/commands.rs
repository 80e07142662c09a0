//! The four subcommands as library functions, so tests can drive them
//! without spawning a process.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use segdoc_core::eval::{report_page, PageReport, Rounding, DEFAULT_IOU_THRESHOLD};
use segdoc_core::preprocess::{
    binarize, denoise, edges, estimate_skew, otsu_threshold, rotate_gray, rotate_with, thin,
    Canvas, Ink, ThresholdLevel, DEFAULT_SKEW_RANGE, DEFAULT_SKEW_STEP,
};
use segdoc_core::segment::{segment_page, Provenance, SegmentParams, SegmentTree};
use segdoc_core::synth::{generate, Manifest, PageSpec};
use segdoc_core::{BinaryImage, BoundingBox, Error, GrayImage};

use crate::error::CliError;
use crate::image_io::{ensure_dir, load_gray, save_pgm, write_bytes};
use crate::schema::{parse_json, to_json, ManifestDoc, ReportDoc, SegmentsDoc};

/// Threshold used when the page has a single intensity.
const UNIFORM_PAGE_LEVEL: u8 = 127;
/// Gray level of box outlines in `overlay.pgm`.
const OUTLINE: u8 = 128;
pub const DEFAULT_MIN_AREA: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Emit {
    pub json: bool,
    pub crops: bool,
    pub overlay: bool,
    pub thinned: bool,
}

impl Default for Emit {
    fn default() -> Self {
        Self {
            json: true,
            crops: false,
            overlay: false,
            thinned: false,
        }
    }
}

impl Emit {
    /// Parse a comma list such as `crops,overlay,json`.
    pub fn parse(list: &str) -> Result<Self, CliError> {
        let mut emit = Emit {
            json: false,
            crops: false,
            overlay: false,
            thinned: false,
        };
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item {
                "json" => emit.json = true,
                "crops" => emit.crops = true,
                "overlay" => emit.overlay = true,
                "thinned" => emit.thinned = true,
                other => return Err(CliError::Usage(format!("unknown --emit item {other:?}"))),
            }
        }
        Ok(emit)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input: PathBuf,
    pub out_dir: PathBuf,
    pub params: SegmentParams,
    pub deskew: bool,
    pub min_area: usize,
    pub emit: Emit,
}

impl RunConfig {
    pub fn new(input: impl Into<PathBuf>, out_dir: impl Into<PathBuf>) -> Self {
        Self {
            input: input.into(),
            out_dir: out_dir.into(),
            params: SegmentParams::default(),
            deskew: true,
            min_area: DEFAULT_MIN_AREA,
            emit: Emit::default(),
        }
    }
}

/// A page after binarization, speck removal and skew correction.
pub struct PreparedPage {
    /// Grayscale input rotated the same way as `binary`.
    pub gray: GrayImage,
    pub binary: BinaryImage,
    pub threshold: ThresholdLevel,
    pub skew_angle: Option<f64>,
}

pub fn prepare_page(gray: GrayImage, min_area: usize, deskew: bool) -> PreparedPage {
    let threshold = match otsu_threshold(&gray) {
        Ok(t) => t,
        Err(Error::DegenerateHistogram(_)) => ThresholdLevel::new(UNIFORM_PAGE_LEVEL),
        Err(e) => unreachable!("otsu only fails on degenerate histograms: {e}"),
    };
    let binary = denoise(&binarize(&gray, threshold, Ink::Dark), min_area);
    if !deskew || binary.is_blank() {
        return PreparedPage {
            gray,
            binary,
            threshold,
            skew_angle: None,
        };
    }
    let est = estimate_skew(&binary, DEFAULT_SKEW_RANGE, DEFAULT_SKEW_STEP)
        .expect("non-blank page with default search grid");
    let (gray, binary) = if est.angle == 0.0 {
        (gray, binary)
    } else {
        (
            rotate_gray(&gray, -est.angle, Canvas::Keep, 255),
            rotate_with(&binary, -est.angle, Canvas::Keep),
        )
    };
    PreparedPage {
        gray,
        binary,
        threshold,
        skew_angle: Some(est.angle),
    }
}

fn draw_outline(img: &mut GrayImage, b: &BoundingBox) {
    for x in b.x..b.right() {
        img.set(x, b.y, OUTLINE);
        img.set(x, b.bottom() - 1, OUTLINE);
    }
    for y in b.y..b.bottom() {
        img.set(b.x, y, OUTLINE);
        img.set(b.right() - 1, y, OUTLINE);
    }
}

/// Outline every line, word and glyph box on a copy of `base`.
pub fn render_overlay(base: &GrayImage, tree: &SegmentTree) -> GrayImage {
    let mut out = base.clone();
    for line in &tree.lines {
        draw_outline(&mut out, &line.line.bbox);
        for word in &line.words {
            draw_outline(&mut out, &word.word.bbox);
            for glyph in &word.glyphs {
                draw_outline(&mut out, &glyph.bbox);
            }
        }
    }
    out
}

fn write_crops(dir: &Path, tree: &SegmentTree) -> Result<(), CliError> {
    for (l, line) in tree.lines.iter().enumerate() {
        save_pgm(
            &dir.join(format!("line{l}.pgm")),
            &line.line.image.to_gray(),
        )?;
        for (w, word) in line.words.iter().enumerate() {
            save_pgm(
                &dir.join(format!("line{l}_word{w}.pgm")),
                &word.word.image.to_gray(),
            )?;
            for (c, glyph) in word.glyphs.iter().enumerate() {
                save_pgm(
                    &dir.join(format!("line{l}_word{w}_char{c}.pgm")),
                    &glyph.image.to_gray(),
                )?;
            }
        }
    }
    Ok(())
}

/// Load, preprocess and segment one page, writing the requested outputs.
pub fn cmd_segment(config: &RunConfig) -> Result<SegmentTree, CliError> {
    let gray = load_gray(&config.input)?;
    ensure_dir(&config.out_dir)?;

    let prepared = prepare_page(gray, config.min_area, config.deskew);
    let mut tree = segment_page(&prepared.binary, &config.params);
    tree.provenance = Provenance {
        threshold: Some(prepared.threshold.level()),
        denoise_min_area: Some(config.min_area),
        deskew_angle: prepared.skew_angle,
    };

    let dir = &config.out_dir;
    if config.emit.json {
        write_bytes(
            &dir.join("segments.json"),
            to_json(&SegmentsDoc::from(&tree)).as_bytes(),
        )?;
    }
    if config.emit.crops {
        write_crops(dir, &tree)?;
    }
    if config.emit.overlay {
        save_pgm(
            &dir.join("overlay.pgm"),
            &render_overlay(&prepared.gray, &tree),
        )?;
    }
    if config.emit.thinned {
        save_pgm(&dir.join("thinned.pgm"), &thin(&prepared.binary).to_gray())?;
    }
    Ok(tree)
}

/// Run [`cmd_segment`] over several inputs on `jobs` worker threads. With
/// more than one input each page writes into `out_dir/<file stem>/`.
pub fn cmd_segment_many(
    inputs: &[PathBuf],
    template: &RunConfig,
    jobs: usize,
) -> Vec<Result<SegmentTree, CliError>> {
    let configs: Vec<RunConfig> = inputs
        .iter()
        .map(|input| {
            let out_dir = if inputs.len() == 1 {
                template.out_dir.clone()
            } else {
                let stem = input.file_stem().unwrap_or(input.as_os_str());
                template.out_dir.join(stem)
            };
            RunConfig {
                input: input.clone(),
                out_dir,
                ..template.clone()
            }
        })
        .collect();

    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<Result<SegmentTree, CliError>>>> =
        Mutex::new((0..configs.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..jobs.clamp(1, configs.len().max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(config) = configs.get(i) else { break };
                let r = cmd_segment(config);
                results.lock().unwrap()[i] = Some(r);
            });
        }
    });
    results
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("every input processed"))
        .collect()
}

/// Write `page.pgm` and `manifest.json` for `spec`.
pub fn cmd_synth(spec: &PageSpec, out_dir: &Path) -> Result<Manifest, CliError> {
    let (page, manifest) = generate(spec).map_err(|e| match e {
        Error::SpecInfeasible(msg) => CliError::InfeasibleSpec(msg),
        other => CliError::InfeasibleSpec(other.to_string()),
    })?;
    ensure_dir(out_dir)?;
    save_pgm(&out_dir.join("page.pgm"), &page.to_gray())?;
    write_bytes(
        &out_dir.join("manifest.json"),
        to_json(&ManifestDoc::from(&manifest)).as_bytes(),
    )?;
    Ok(manifest)
}

/// Binarized, thinned and edge images for inspection.
pub fn cmd_preprocess(config: &RunConfig) -> Result<PreparedPage, CliError> {
    let gray = load_gray(&config.input)?;
    ensure_dir(&config.out_dir)?;
    let prepared = prepare_page(gray, config.min_area, config.deskew);
    let dir = &config.out_dir;
    save_pgm(&dir.join("binary.pgm"), &prepared.binary.to_gray())?;
    save_pgm(&dir.join("thinned.pgm"), &thin(&prepared.binary).to_gray())?;
    save_pgm(&dir.join("edges.pgm"), &edges(&prepared.binary).to_gray())?;
    let info = serde_json::json!({
        "threshold": prepared.threshold.level(),
        "skew_angle": prepared.skew_angle,
        "denoise_min_area": config.min_area,
    });
    write_bytes(
        &dir.join("preprocess.json"),
        format!("{}\n", serde_json::to_string_pretty(&info).unwrap()).as_bytes(),
    )?;
    Ok(prepared)
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::UnreadableInput {
        path: path.to_path_buf(),
        source,
    })
}

pub fn load_segments(path: &Path) -> Result<SegmentsDoc, CliError> {
    let doc: SegmentsDoc = parse_json(&read_text(path)?, "segments")?;
    doc.validate()?;
    Ok(doc)
}

pub fn load_manifest(path: &Path) -> Result<ManifestDoc, CliError> {
    let doc: ManifestDoc = parse_json(&read_text(path)?, "manifest")?;
    doc.validate()?;
    Ok(doc)
}

#[derive(Debug, Clone)]
pub struct EvalConfig {
    pub segments: PathBuf,
    pub manifest: PathBuf,
    pub out_dir: PathBuf,
    pub rounding: Rounding,
    pub iou_threshold: f64,
}

impl EvalConfig {
    pub fn new(segments: impl Into<PathBuf>, manifest: impl Into<PathBuf>) -> Self {
        let segments = segments.into();
        let out_dir = segments.parent().map(Path::to_path_buf).unwrap_or_default();
        Self {
            segments,
            manifest: manifest.into(),
            out_dir,
            rounding: Rounding::default(),
            iou_threshold: DEFAULT_IOU_THRESHOLD,
        }
    }
}

/// Level table in the shape of the published summary.
pub fn format_table(report: &PageReport, rounding: Rounding) -> String {
    let mut out = format!(
        "{:<12}{:>10}{:>12}{:>10}\n",
        "level", "present", "recognized", "accuracy"
    );
    for l in &report.levels {
        out.push_str(&format!(
            "{:<12}{:>10}{:>12}{:>9}%\n",
            l.level.name(),
            l.present,
            l.recognized,
            l.accuracy.display(rounding)
        ));
    }
    out
}

pub fn cmd_eval(config: &EvalConfig) -> Result<(PageReport, String), CliError> {
    let segments = load_segments(&config.segments)?;
    let manifest = load_manifest(&config.manifest)?;
    let truth = Manifest::from(&manifest).to_page_boxes();
    let report = report_page(&segments.to_page_boxes(), &truth, config.iou_threshold)
        .map_err(|e| CliError::SchemaMismatch(e.to_string()))?;
    if !config.out_dir.as_os_str().is_empty() {
        ensure_dir(&config.out_dir)?;
    }
    write_bytes(
        &config.out_dir.join("report.json"),
        to_json(&ReportDoc::new(&report, config.rounding)).as_bytes(),
    )?;
    let table = format_table(&report, config.rounding);
    Ok((report, table))
}
