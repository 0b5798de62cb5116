//! PGM / PPM codec, maxval 255 only.
//!
//! Reads P2, P3, P5 and P6 with arbitrary whitespace and `#` comments in the
//! header. Writes binary P5 / P6 with single-space / newline separators:
//! `P5\n<w> <h>\n255\n` followed by the raw samples.

use crate::error::{Error, PnmError, Result};
use crate::image::{ColorImage, GrayImage};

#[derive(Debug, Clone, PartialEq)]
pub enum PnmImage {
    Gray(GrayImage),
    Color(ColorImage),
}

impl PnmImage {
    pub fn dimensions(&self) -> (usize, usize) {
        match self {
            PnmImage::Gray(g) => g.dimensions(),
            PnmImage::Color(c) => c.dimensions(),
        }
    }

    /// Gray images pass through; color images go through the luma conversion.
    pub fn into_gray(self) -> GrayImage {
        match self {
            PnmImage::Gray(g) => g,
            PnmImage::Color(c) => crate::image::rgb_to_gray(&c),
        }
    }
}

impl From<GrayImage> for PnmImage {
    fn from(img: GrayImage) -> Self {
        PnmImage::Gray(img)
    }
}

impl From<ColorImage> for PnmImage {
    fn from(img: ColorImage) -> Self {
        PnmImage::Color(img)
    }
}

struct HeaderReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> HeaderReader<'a> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn token(&mut self) -> Option<&'a [u8]> {
        self.skip_space_and_comments();
        let start = self.pos;
        while let Some(&b) = self.bytes.get(self.pos) {
            if b.is_ascii_whitespace() || b == b'#' {
                break;
            }
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.bytes[start..self.pos])
    }

    fn integer(&mut self) -> Result<Option<i64>, PnmError> {
        match self.token() {
            None => Ok(None),
            Some(tok) => {
                let text = String::from_utf8_lossy(tok);
                text.parse::<i64>()
                    .map(Some)
                    .map_err(|_| PnmError::BadHeader(text.into_owned()))
            }
        }
    }

    fn header_integer(&mut self) -> Result<i64, PnmError> {
        self.integer()?
            .ok_or_else(|| PnmError::BadHeader("<end of input>".to_string()))
    }
}

/// Decode a PGM or PPM byte stream.
pub fn load_pnm(bytes: &[u8]) -> Result<PnmImage, PnmError> {
    let mut reader = HeaderReader { bytes, pos: 0 };
    let magic = reader.token().unwrap_or_default();
    let (channels, binary) = match magic {
        b"P2" => (1, false),
        b"P5" => (1, true),
        b"P3" => (3, false),
        b"P6" => (3, true),
        other => {
            return Err(PnmError::BadMagic(
                String::from_utf8_lossy(other).into_owned(),
            ))
        }
    };

    let width = reader.header_integer()?;
    if width <= 0 {
        return Err(PnmError::BadDimension(width));
    }
    let height = reader.header_integer()?;
    if height <= 0 {
        return Err(PnmError::BadDimension(height));
    }
    let maxval = reader.header_integer()?;
    if maxval != 255 {
        return Err(PnmError::UnsupportedMaxval(maxval));
    }

    let (width, height) = (width as usize, height as usize);
    let expected = width * height * channels;
    let samples: Vec<f64> = if binary {
        // exactly one whitespace byte separates maxval from the raster
        let start = reader.pos + 1;
        let raster = bytes.get(start..).unwrap_or_default();
        if raster.len() < expected {
            return Err(PnmError::Truncated {
                expected,
                found: raster.len(),
            });
        }
        raster[..expected].iter().map(|&b| b as f64).collect()
    } else {
        let mut out = Vec::with_capacity(expected);
        while out.len() < expected {
            match reader.integer()? {
                None => {
                    return Err(PnmError::Truncated {
                        expected,
                        found: out.len(),
                    })
                }
                Some(v) if !(0..=255).contains(&v) => return Err(PnmError::SampleOutOfRange(v)),
                Some(v) => out.push(v as f64),
            }
        }
        out
    };

    // dimensions and ranges are already validated, so construction cannot fail
    Ok(if channels == 1 {
        PnmImage::Gray(GrayImage::new(width, height, samples).expect("validated gray raster"))
    } else {
        let pixels = samples
            .chunks_exact(3)
            .map(|c| [c[0], c[1], c[2]])
            .collect();
        PnmImage::Color(ColorImage::new(width, height, pixels).expect("validated color raster"))
    })
}

fn sample_byte(index: usize, value: f64) -> Result<u8> {
    if value.fract() != 0.0 || !(0.0..=255.0).contains(&value) {
        return Err(Error::NotQuantized { index, value });
    }
    Ok(value as u8)
}

/// Encode as binary P5 / P6. Every sample must already be an integer in
/// `[0, 255]` (see [`crate::image::quantize`]).
pub fn save_pnm(img: &PnmImage) -> Result<Vec<u8>> {
    let (magic, (w, h)) = match img {
        PnmImage::Gray(g) => ("P5", g.dimensions()),
        PnmImage::Color(c) => ("P6", c.dimensions()),
    };
    let mut out = format!("{magic}\n{w} {h}\n255\n").into_bytes();
    match img {
        PnmImage::Gray(g) => {
            out.reserve(w * h);
            for (i, &v) in g.pixels().iter().enumerate() {
                out.push(sample_byte(i, v)?);
            }
        }
        PnmImage::Color(c) => {
            out.reserve(3 * w * h);
            for (i, &v) in c.pixels().iter().flatten().enumerate() {
                out.push(sample_byte(i, v)?);
            }
        }
    }
    Ok(out)
}

/// Convenience for the common gray case.
pub fn save_pgm(img: &GrayImage) -> Result<Vec<u8>> {
    save_pnm(&PnmImage::Gray(img.clone()))
}
