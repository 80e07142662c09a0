//! Projection-profile segmentation of Devanagari-style document images.
//!
//! The pipeline binarizes a scanned page (ink = 1), removes specks, corrects
//! skew, and then cuts the page into text lines (blank rows), words (blank
//! columns) and characters (columns crossed by at most one pixel of the
//! thinned word, which is where only the shirorekha header runs).
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the CLI live
//! in the `segdoc` crate.
#![no_std]

extern crate alloc;

pub mod error;
pub mod eval;
pub mod preprocess;
pub mod raster;
pub mod segment;
pub mod synth;

pub use error::{Error, Result};
pub use raster::{BinaryImage, BoundingBox, Component, Connectivity, GrayImage, ProjectionProfile};
pub use segment::{SegmentParams, SegmentTree};
