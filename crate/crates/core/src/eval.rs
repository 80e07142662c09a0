//! Segmentation accuracy as reported per level (lines, words, characters),
//! plus box-level matching against ground truth.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::raster::BoundingBox;
use crate::segment::SegmentTree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    Lines,
    Words,
    Characters,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::Lines, Level::Words, Level::Characters];

    pub fn name(self) -> &'static str {
        match self {
            Level::Lines => "lines",
            Level::Words => "words",
            Level::Characters => "characters",
        }
    }
}

/// Display rounding for percentages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Rounding {
    /// Drop the fraction (3/7 -> 42).
    Truncate,
    /// Nearest integer, halves up (133/242 -> 55).
    #[default]
    HalfUp,
    /// Two decimals, rounded half-up.
    Exact,
}

/// `100 * num / den` kept as an exact ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Accuracy {
    pub num: u64,
    pub den: u64,
}

impl Accuracy {
    pub fn percent(&self) -> f64 {
        100.0 * self.num as f64 / self.den as f64
    }

    /// `100 * num / den` scaled by `scale` and rounded per `mode`.
    fn scaled(&self, scale: u64, half_up: bool) -> u64 {
        let n = 100 * scale as u128 * self.num as u128;
        let d = self.den as u128;
        if half_up {
            ((2 * n + d) / (2 * d)) as u64
        } else {
            (n / d) as u64
        }
    }

    pub fn display(&self, rounding: Rounding) -> String {
        match rounding {
            Rounding::Truncate => format!("{}", self.scaled(1, false)),
            Rounding::HalfUp => format!("{}", self.scaled(1, true)),
            Rounding::Exact => {
                let v = self.scaled(100, true);
                format!("{}.{:02}", v / 100, v % 100)
            }
        }
    }
}

/// `100 * min / max`; two zero counts agree perfectly.
pub fn accuracy_ratio(present: u64, recognized: u64) -> Accuracy {
    let (lo, hi) = (present.min(recognized), present.max(recognized));
    if hi == 0 {
        Accuracy { num: 1, den: 1 }
    } else {
        Accuracy { num: lo, den: hi }
    }
}

pub fn accuracy(present: u64, recognized: u64) -> f64 {
    accuracy_ratio(present, recognized).percent()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelReport {
    pub level: Level,
    pub present: u64,
    pub recognized: u64,
    pub accuracy: Accuracy,
}

impl LevelReport {
    pub fn new(level: Level, present: u64, recognized: u64) -> Self {
        Self {
            level,
            present,
            recognized,
            accuracy: accuracy_ratio(present, recognized),
        }
    }

    pub fn accuracy_percent(&self) -> f64 {
        self.accuracy.percent()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxMatchReport {
    pub matched: usize,
    /// Predicted boxes left without a ground-truth partner.
    pub over_segmented: usize,
    /// Ground-truth boxes left without a predicted partner.
    pub under_segmented: usize,
    pub iou_threshold: f64,
}

/// Greedy one-to-one matching in descending IoU order; pairs below
/// `iou_threshold` never match. Ties keep predicted/truth index order.
pub fn compare_boxes(
    predicted: &[BoundingBox],
    truth: &[BoundingBox],
    iou_threshold: f64,
) -> BoxMatchReport {
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (i, p) in predicted.iter().enumerate() {
        for (j, t) in truth.iter().enumerate() {
            let iou = p.iou(t);
            if iou > 0.0 && iou >= iou_threshold {
                pairs.push((iou, i, j));
            }
        }
    }
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut pred_used = alloc::vec![false; predicted.len()];
    let mut truth_used = alloc::vec![false; truth.len()];
    let mut matched = 0;
    for (_, i, j) in pairs {
        if !pred_used[i] && !truth_used[j] {
            pred_used[i] = true;
            truth_used[j] = true;
            matched += 1;
        }
    }
    BoxMatchReport {
        matched,
        over_segmented: predicted.len() - matched,
        under_segmented: truth.len() - matched,
        iou_threshold,
    }
}

/// Box hierarchy of one page, shared by segmentation output and ground
/// truth.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PageBoxes {
    pub width: usize,
    pub height: usize,
    pub lines: Vec<LineBoxes>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineBoxes {
    pub bbox: BoundingBox,
    pub words: Vec<WordBoxes>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordBoxes {
    pub bbox: BoundingBox,
    pub glyphs: Vec<BoundingBox>,
}

impl PageBoxes {
    pub fn level_boxes(&self, level: Level) -> Vec<BoundingBox> {
        match level {
            Level::Lines => self.lines.iter().map(|l| l.bbox).collect(),
            Level::Words => self
                .lines
                .iter()
                .flat_map(|l| &l.words)
                .map(|w| w.bbox)
                .collect(),
            Level::Characters => self
                .lines
                .iter()
                .flat_map(|l| &l.words)
                .flat_map(|w| w.glyphs.iter().copied())
                .collect(),
        }
    }

    pub fn count(&self, level: Level) -> usize {
        match level {
            Level::Lines => self.lines.len(),
            Level::Words => self.lines.iter().map(|l| l.words.len()).sum(),
            Level::Characters => self
                .lines
                .iter()
                .flat_map(|l| &l.words)
                .map(|w| w.glyphs.len())
                .sum(),
        }
    }
}

impl From<&SegmentTree> for PageBoxes {
    fn from(tree: &SegmentTree) -> Self {
        PageBoxes {
            width: tree.width,
            height: tree.height,
            lines: tree
                .lines
                .iter()
                .map(|l| LineBoxes {
                    bbox: l.line.bbox,
                    words: l
                        .words
                        .iter()
                        .map(|w| WordBoxes {
                            bbox: w.word.bbox,
                            glyphs: w.glyphs.iter().map(|g| g.bbox).collect(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

pub const DEFAULT_IOU_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct PageReport {
    pub levels: Vec<LevelReport>,
    pub boxes: Vec<(Level, BoxMatchReport)>,
}

/// Counts and box matches per level, taking `truth` counts as present.
pub fn report_page(
    predicted: &PageBoxes,
    truth: &PageBoxes,
    iou_threshold: f64,
) -> Result<PageReport> {
    if (predicted.width, predicted.height) != (truth.width, truth.height) {
        return Err(Error::PageMismatch(
            predicted.width,
            predicted.height,
            truth.width,
            truth.height,
        ));
    }
    let levels = Level::ALL
        .iter()
        .map(|&level| {
            LevelReport::new(
                level,
                truth.count(level) as u64,
                predicted.count(level) as u64,
            )
        })
        .collect();
    let boxes = Level::ALL
        .iter()
        .map(|&level| {
            (
                level,
                compare_boxes(
                    &predicted.level_boxes(level),
                    &truth.level_boxes(level),
                    iou_threshold,
                ),
            )
        })
        .collect();
    Ok(PageReport { levels, boxes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn character_table_rows() {
        assert_eq!(accuracy(3, 5), 60.0);
        assert_eq!(accuracy(6, 12), 50.0);
        assert_eq!(accuracy_ratio(3, 7), Accuracy { num: 3, den: 7 });
        assert_eq!(accuracy_ratio(3, 7).display(Rounding::Truncate), "42");
        assert_eq!(accuracy_ratio(3, 7).display(Rounding::Exact), "42.86");
        assert_eq!(accuracy_ratio(2, 6).display(Rounding::Exact), "33.33");
    }

    #[test]
    fn overall_table_rows() {
        assert_eq!(accuracy(8, 8), 100.0);
        assert_eq!(accuracy_ratio(41, 45).display(Rounding::HalfUp), "91");
        assert_eq!(accuracy_ratio(41, 45).display(Rounding::Exact), "91.11");
        assert_eq!(accuracy_ratio(133, 242).display(Rounding::HalfUp), "55");
        assert_eq!(accuracy_ratio(133, 242).display(Rounding::Truncate), "54");
        assert_eq!(accuracy_ratio(133, 242).display(Rounding::Exact), "54.96");
    }

    #[test]
    fn zero_counts_agree() {
        assert_eq!(accuracy(0, 0), 100.0);
        assert_eq!(accuracy(0, 4), 0.0);
    }

    #[test]
    fn halves_lose_at_high_threshold() {
        let truth = [
            BoundingBox::new(0, 0, 10, 10),
            BoundingBox::new(20, 0, 10, 10),
        ];
        let pred: Vec<_> = truth
            .iter()
            .flat_map(|b| {
                [
                    BoundingBox::new(b.x, b.y, 5, 10),
                    BoundingBox::new(b.x + 5, b.y, 5, 10),
                ]
            })
            .collect();
        let r = compare_boxes(&pred, &truth, 0.8);
        assert_eq!((r.matched, r.over_segmented, r.under_segmented), (0, 4, 2));
        let r = compare_boxes(&truth, &truth, 1.0);
        assert_eq!((r.matched, r.over_segmented, r.under_segmented), (2, 0, 0));
    }

    #[test]
    fn greedy_prefers_best_overlap() {
        let truth = [BoundingBox::new(0, 0, 10, 10)];
        let pred = [
            BoundingBox::new(1, 0, 10, 10),
            BoundingBox::new(0, 0, 10, 10),
        ];
        let r = compare_boxes(&pred, &truth, 0.5);
        assert_eq!((r.matched, r.over_segmented, r.under_segmented), (1, 1, 0));
    }

    #[test]
    fn report_rejects_mismatched_pages() {
        let a = PageBoxes {
            width: 10,
            height: 10,
            lines: Vec::new(),
        };
        let b = PageBoxes {
            width: 10,
            height: 11,
            lines: Vec::new(),
        };
        assert!(matches!(
            report_page(&a, &b, 0.5),
            Err(Error::PageMismatch(..))
        ));
        let r = report_page(&a, &a, 0.5).unwrap();
        assert!(r.levels.iter().all(|l| l.accuracy_percent() == 100.0));
    }
}
