//! Page loading (PGM or PNG) and PGM output with CLI error mapping.

use std::fs;
use std::path::Path;

use segdoc_core::preprocess::{grayscale, RgbImage};
use segdoc_core::GrayImage;

use crate::error::CliError;
use crate::pnm::{self, PgmFormat};

const PNG_SIGNATURE: &[u8] = b"\x89PNG\r\n\x1a\n";

fn malformed(path: &Path, reason: impl ToString) -> CliError {
    CliError::MalformedImage {
        path: path.to_path_buf(),
        reason: reason.to_string(),
    }
}

/// Decode PGM or PNG bytes into grayscale. Colour PNGs go through the
/// same luma weights as everything else.
pub fn decode_gray(bytes: &[u8], path: &Path) -> Result<GrayImage, CliError> {
    if pnm::is_pgm(bytes) {
        return pnm::read_pgm(bytes).map_err(|e| malformed(path, e));
    }
    if bytes.starts_with(PNG_SIGNATURE) {
        let decoded = image::load_from_memory_with_format(bytes, image::ImageFormat::Png)
            .map_err(|e| malformed(path, e))?;
        let rgb = decoded.to_rgb8();
        let (w, h) = (rgb.width() as usize, rgb.height() as usize);
        let color = RgbImage::new(w, h, rgb.into_raw()).map_err(|e| malformed(path, e))?;
        return Ok(grayscale(&color));
    }
    Err(malformed(path, "expected a PGM (P2/P5) or PNG file"))
}

pub fn load_gray(path: &Path) -> Result<GrayImage, CliError> {
    let bytes = fs::read(path).map_err(|source| CliError::UnreadableInput {
        path: path.to_path_buf(),
        source,
    })?;
    decode_gray(&bytes, path)
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|source| CliError::UnwritableOutput {
        path: path.to_path_buf(),
        source,
    })
}

pub fn save_pgm(path: &Path, img: &GrayImage) -> Result<(), CliError> {
    write_bytes(path, &pnm::write_pgm(img, PgmFormat::Binary))
}

pub fn ensure_dir(path: &Path) -> Result<(), CliError> {
    fs::create_dir_all(path).map_err(|source| CliError::UnwritableOutput {
        path: path.to_path_buf(),
        source,
    })
}
