//! Grayscale PGM, ASCII (`P2`) and binary (`P5`), 8-bit only.
//!
//! Output is always `P5` with maxval 255.

use std::path::Path;

use thiserror::Error;

use super::FormatError;
use crate::image2d::ImagePlane;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PgmError {
    #[error("not a grayscale PGM (magic {0:?})")]
    BadMagic(String),
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("unsupported maxval {0} (1..=255 required)")]
    UnsupportedMaxval(u32),
    #[error("truncated pixel data")]
    TruncatedPixelData,
    #[error("malformed pixel data: {0}")]
    MalformedPixelData(String),
    #[error("sample {value} exceeds maxval {maxval}")]
    SampleOutOfRange { value: u32, maxval: u32 },
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    /// Skips whitespace and `#` comments.
    fn skip_blank(&mut self) {
        while let Some(&b) = self.data.get(self.pos) {
            if b == b'#' {
                while self.data.get(self.pos).is_some_and(|&c| c != b'\n') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn token(&mut self) -> Option<&'a [u8]> {
        self.skip_blank();
        let start = self.pos;
        while self
            .data
            .get(self.pos)
            .is_some_and(|b| !b.is_ascii_whitespace() && *b != b'#')
        {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.data[start..self.pos])
    }

    fn header_number(&mut self, what: &str) -> Result<u32, PgmError> {
        let tok = self
            .token()
            .ok_or_else(|| PgmError::MalformedHeader(format!("missing {what}")))?;
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| {
                PgmError::MalformedHeader(format!("bad {what} {:?}", String::from_utf8_lossy(tok)))
            })
    }
}

pub fn parse_pgm(data: &[u8]) -> Result<ImagePlane, PgmError> {
    let mut cur = Cursor { data, pos: 0 };
    let magic = cur.token().unwrap_or_default();
    let binary = match magic {
        b"P2" => false,
        b"P5" => true,
        other => {
            return Err(PgmError::BadMagic(
                String::from_utf8_lossy(other).into_owned(),
            ))
        }
    };
    let width = cur.header_number("width")? as usize;
    let height = cur.header_number("height")? as usize;
    let maxval = cur.header_number("maxval")?;
    if width == 0 || height == 0 {
        return Err(PgmError::MalformedHeader(format!(
            "empty image {width}x{height}"
        )));
    }
    if maxval == 0 || maxval > 255 {
        return Err(PgmError::UnsupportedMaxval(maxval));
    }
    let count = width * height;
    let mut samples = Vec::with_capacity(count);
    if binary {
        // exactly one whitespace byte separates the header from the raster
        if !data.get(cur.pos).is_some_and(u8::is_ascii_whitespace) {
            return Err(PgmError::MalformedHeader(
                "missing separator after maxval".into(),
            ));
        }
        let raster = &data[cur.pos + 1..];
        if raster.len() < count {
            return Err(PgmError::TruncatedPixelData);
        }
        for &b in &raster[..count] {
            if b as u32 > maxval {
                return Err(PgmError::SampleOutOfRange {
                    value: b as u32,
                    maxval,
                });
            }
            samples.push(b as f64);
        }
    } else {
        for _ in 0..count {
            let tok = cur.token().ok_or(PgmError::TruncatedPixelData)?;
            let value: u32 = std::str::from_utf8(tok)
                .ok()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| {
                    PgmError::MalformedPixelData(String::from_utf8_lossy(tok).into_owned())
                })?;
            if value > maxval {
                return Err(PgmError::SampleOutOfRange { value, maxval });
            }
            samples.push(value as f64);
        }
    }
    Ok(ImagePlane {
        height,
        width,
        maxval,
        samples,
    })
}

/// `P5`, maxval 255; samples clamped to `[0, 255]` and rounded half away from zero.
pub fn encode_pgm(img: &ImagePlane) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend(
        img.samples
            .iter()
            .map(|v| v.round().clamp(0.0, 255.0) as u8),
    );
    out
}

pub fn read_pgm(path: &Path) -> Result<ImagePlane, FormatError> {
    let data = std::fs::read(path).map_err(|e| FormatError::io(path, e))?;
    parse_pgm(&data).map_err(|source| FormatError::Pgm {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_pgm(img: &ImagePlane, path: &Path) -> Result<(), FormatError> {
    std::fs::write(path, encode_pgm(img)).map_err(|e| FormatError::io(path, e))
}
