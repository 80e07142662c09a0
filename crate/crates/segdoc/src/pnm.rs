//! PGM (P2 ASCII / P5 binary) reading and writing, 8-bit only.

use segdoc_core::GrayImage;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgmFormat {
    /// P2
    Ascii,
    /// P5
    Binary,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PnmError {
    #[error("not a PGM file (magic {0:?})")]
    BadMagic(String),
    #[error("truncated header")]
    TruncatedHeader,
    #[error("invalid header field {0:?}")]
    BadNumber(String),
    #[error("unsupported maxval {0}; expected 1..=255")]
    UnsupportedMaxval(u32),
    #[error("empty image {0}x{1}")]
    Empty(usize, usize),
    #[error("pixel data truncated: {got} of {want} samples")]
    Truncated { got: usize, want: usize },
    #[error("sample {0} exceeds maxval")]
    SampleRange(u32),
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_space_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                c if c.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn token(&mut self) -> Option<&'a [u8]> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.bytes[start..self.pos])
    }

    fn number(&mut self) -> Result<u32, PnmError> {
        let tok = self.token().ok_or(PnmError::TruncatedHeader)?;
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| PnmError::BadNumber(String::from_utf8_lossy(tok).into_owned()))
    }
}

pub fn is_pgm(bytes: &[u8]) -> bool {
    bytes.starts_with(b"P2") || bytes.starts_with(b"P5")
}

/// Decode a PGM. Samples are rescaled to 0..=255 when maxval is smaller.
pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage, PnmError> {
    let magic = bytes.get(..2).unwrap_or(bytes);
    let ascii = match magic {
        b"P2" => true,
        b"P5" => false,
        _ => {
            return Err(PnmError::BadMagic(
                String::from_utf8_lossy(magic).into_owned(),
            ))
        }
    };
    let mut cur = Cursor { bytes, pos: 2 };
    let width = cur.number()? as usize;
    let height = cur.number()? as usize;
    let maxval = cur.number()?;
    if maxval == 0 || maxval > 255 {
        return Err(PnmError::UnsupportedMaxval(maxval));
    }
    if width == 0 || height == 0 {
        return Err(PnmError::Empty(width, height));
    }
    let want = width * height;
    let scale = |v: u32| -> Result<u8, PnmError> {
        if v > maxval {
            return Err(PnmError::SampleRange(v));
        }
        Ok(((v * 255 + maxval / 2) / maxval) as u8)
    };

    let mut data = Vec::with_capacity(want);
    if ascii {
        while data.len() < want {
            let tok = cur.token().ok_or(PnmError::Truncated {
                got: data.len(),
                want,
            })?;
            let text = std::str::from_utf8(tok).unwrap_or("");
            let v: u32 = text
                .parse()
                .map_err(|_| PnmError::BadNumber(text.to_string()))?;
            data.push(scale(v)?);
        }
    } else {
        // Exactly one whitespace byte separates the header from the raster.
        let start = cur.pos + 1;
        let raster = bytes.get(start..).unwrap_or(&[]);
        if raster.len() < want {
            return Err(PnmError::Truncated {
                got: raster.len(),
                want,
            });
        }
        for &v in &raster[..want] {
            data.push(scale(v as u32)?);
        }
    }
    Ok(GrayImage::new(width, height, data).expect("dimensions checked above"))
}

pub fn write_pgm(img: &GrayImage, format: PgmFormat) -> Vec<u8> {
    let (w, h) = (img.width(), img.height());
    match format {
        PgmFormat::Binary => {
            let mut out = format!("P5\n{w} {h}\n255\n").into_bytes();
            out.extend_from_slice(img.data());
            out
        }
        PgmFormat::Ascii => {
            let mut out = format!("P2\n{w} {h}\n255\n");
            for row in img.data().chunks_exact(w) {
                // Keep lines under 70 characters.
                let mut line_len = 0;
                for (i, v) in row.iter().enumerate() {
                    let s = v.to_string();
                    if i > 0 {
                        if line_len + 1 + s.len() > 70 {
                            out.push('\n');
                            line_len = 0;
                        } else {
                            out.push(' ');
                            line_len += 1;
                        }
                    }
                    line_len += s.len();
                    out.push_str(&s);
                }
                out.push('\n');
            }
            out.into_bytes()
        }
    }
}
