use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("pixel buffer holds {actual} values, expected {expected}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("image dimensions must be at least 1x1 (got {width}x{height})")]
    EmptyImage { width: usize, height: usize },

    #[error("binary pixel at index {index} has value {value}, expected 0 or 1")]
    InvalidPixel { index: usize, value: u8 },

    #[error("box ({x},{y},{w},{h}) exceeds {width}x{height} image")]
    OutOfBounds {
        x: usize,
        y: usize,
        w: usize,
        h: usize,
        width: usize,
        height: usize,
    },

    /// Every pixel has the same intensity; the carried level is that intensity.
    #[error("histogram has a single intensity ({0}); no threshold separates it")]
    DegenerateHistogram(u8),

    #[error("image contains no ink pixels")]
    BlankImage,

    #[error("no shirorekha header row found")]
    NoHeaderFound,

    #[error("page spec cannot be realized: {0}")]
    SpecInfeasible(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),

    #[error("page dimensions differ: {0}x{1} vs {2}x{3}")]
    PageMismatch(usize, usize, usize, usize),
}
