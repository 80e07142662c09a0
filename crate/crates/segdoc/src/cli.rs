//! Argument parsing for the `segdoc` binary.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use segdoc_core::eval::{Rounding, DEFAULT_IOU_THRESHOLD};
use segdoc_core::segment::SegmentParams;
use segdoc_core::synth::PageSpec;

use crate::commands::{
    cmd_eval, cmd_preprocess, cmd_segment_many, cmd_synth, Emit, EvalConfig, RunConfig,
    DEFAULT_MIN_AREA,
};
use crate::error::CliError;
use crate::schema::{parse_json, PageSpecDoc};

#[derive(Debug, Parser)]
#[command(
    name = "segdoc",
    version,
    about = "Line, word and character segmentation of document images"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Segment a page into lines, words and characters.
    Segment(SegmentArgs),
    /// Generate a synthetic page and its ground-truth manifest.
    Synth(SynthArgs),
    /// Compare segments.json against manifest.json.
    Eval(EvalArgs),
    /// Dump binarized, thinned and edge images.
    Preprocess(PreprocessArgs),
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    /// Skip skew estimation and correction.
    #[arg(long)]
    pub no_deskew: bool,
    /// Remove connected components smaller than this many pixels.
    #[arg(long, default_value_t = DEFAULT_MIN_AREA)]
    pub min_area: usize,
}

#[derive(Debug, Args)]
pub struct SegmentArgs {
    /// Input page (PGM or PNG); repeat for several pages.
    #[arg(long, required = true)]
    pub input: Vec<PathBuf>,
    #[arg(long)]
    pub out_dir: PathBuf,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
    /// Rows with at most this many ink pixels are blank.
    #[arg(long, default_value_t = 0)]
    pub row_noise: u32,
    /// Columns with at most this many ink pixels are blank.
    #[arg(long, default_value_t = 0)]
    pub col_noise: u32,
    /// Minimum blank rows between lines.
    #[arg(long, default_value_t = 1)]
    pub min_line_gap: usize,
    /// Minimum blank columns between words.
    #[arg(long, default_value_t = 1)]
    pub min_word_gap: usize,
    /// Thinned-column pixel count at or below which glyphs split.
    #[arg(long, default_value_t = 1)]
    pub char_separator: u32,
    /// Comma list of outputs: json, crops, overlay, thinned.
    #[arg(long, default_value = "json")]
    pub emit: String,
    /// Worker threads when several inputs are given.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub out_dir: PathBuf,
    /// JSON page spec; flags below override its fields.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub lines: Option<usize>,
    #[arg(long)]
    pub width: Option<usize>,
    #[arg(long)]
    pub height: Option<usize>,
    /// Rotation applied after layout, degrees counter-clockwise.
    #[arg(long, allow_hyphen_values = true)]
    pub skew: Option<f64>,
    #[arg(long)]
    pub digit_prob: Option<f64>,
    #[arg(long)]
    pub bar_prob: Option<f64>,
    #[arg(long)]
    pub specks: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RoundingArg {
    Truncate,
    HalfUp,
    Exact,
}

impl From<RoundingArg> for Rounding {
    fn from(r: RoundingArg) -> Self {
        match r {
            RoundingArg::Truncate => Rounding::Truncate,
            RoundingArg::HalfUp => Rounding::HalfUp,
            RoundingArg::Exact => Rounding::Exact,
        }
    }
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub segments: PathBuf,
    #[arg(long)]
    pub manifest: PathBuf,
    /// Where report.json goes; defaults to the directory of --segments.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "half-up")]
    pub rounding: RoundingArg,
    #[arg(long, default_value_t = DEFAULT_IOU_THRESHOLD)]
    pub iou: f64,
}

#[derive(Debug, Args)]
pub struct PreprocessArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out_dir: PathBuf,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
}

fn synth_spec(args: &SynthArgs) -> Result<PageSpec, CliError> {
    let mut spec = match &args.spec {
        Some(path) => {
            let text =
                std::fs::read_to_string(path).map_err(|source| CliError::UnreadableInput {
                    path: path.clone(),
                    source,
                })?;
            let doc: PageSpecDoc = parse_json(&text, "page spec")
                .map_err(|e| CliError::InfeasibleSpec(e.to_string()))?;
            PageSpec::from(&doc)
        }
        None => PageSpec::default(),
    };
    if let Some(v) = args.seed {
        spec.seed = v;
    }
    if let Some(v) = args.lines {
        spec.line_count = v;
    }
    if let Some(v) = args.width {
        spec.width = v;
    }
    if let Some(v) = args.height {
        spec.height = v;
    }
    if let Some(v) = args.skew {
        spec.skew_angle = v;
    }
    if let Some(v) = args.digit_prob {
        spec.digit_word_probability = v;
    }
    if let Some(v) = args.bar_prob {
        spec.detached_bar_probability = v;
    }
    if let Some(v) = args.specks {
        spec.noise_speck_count = v;
    }
    Ok(spec)
}

/// Execute a parsed command. Human-readable output goes to stdout.
pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Segment(args) => {
            let mut template = RunConfig::new(PathBuf::new(), args.out_dir.clone());
            template.params = SegmentParams {
                row_noise_threshold: args.row_noise,
                col_noise_threshold: args.col_noise,
                min_gap_rows: args.min_line_gap,
                min_word_gap_cols: args.min_word_gap,
                char_separator_max_count: args.char_separator,
            };
            if args.char_separator == 0 {
                return Err(CliError::Usage("--char-separator must be >= 1".into()));
            }
            template.deskew = !args.pipeline.no_deskew;
            template.min_area = args.pipeline.min_area;
            template.emit = Emit::parse(&args.emit)?;
            for (input, result) in
                args.input
                    .iter()
                    .zip(cmd_segment_many(&args.input, &template, args.jobs))
            {
                let tree = result?;
                println!(
                    "{}: {} lines, {} words, {} glyphs",
                    input.display(),
                    tree.line_count(),
                    tree.word_count(),
                    tree.glyph_count()
                );
            }
            Ok(())
        }
        Command::Synth(args) => {
            let spec = synth_spec(&args)?;
            let m = cmd_synth(&spec, &args.out_dir)?;
            println!(
                "{}: {} lines, {} words, {} glyphs",
                args.out_dir.join("page.pgm").display(),
                m.lines.len(),
                m.word_count(),
                m.glyph_count()
            );
            Ok(())
        }
        Command::Eval(args) => {
            if !(args.iou > 0.0 && args.iou <= 1.0) {
                return Err(CliError::Usage("--iou must lie in (0, 1]".into()));
            }
            let mut config = EvalConfig::new(&args.segments, &args.manifest);
            if let Some(dir) = args.out_dir {
                config.out_dir = dir;
            }
            config.rounding = args.rounding.into();
            config.iou_threshold = args.iou;
            let (_, table) = cmd_eval(&config)?;
            print!("{table}");
            Ok(())
        }
        Command::Preprocess(args) => {
            let mut config = RunConfig::new(&args.input, &args.out_dir);
            config.deskew = !args.pipeline.no_deskew;
            config.min_area = args.pipeline.min_area;
            let p = cmd_preprocess(&config)?;
            println!(
                "threshold {}, skew {}",
                p.threshold.level(),
                p.skew_angle
                    .map_or("off".to_string(), |a| format!("{a:.1}"))
            );
            Ok(())
        }
    }
}
