//! Grayscale images and binary logos, with bit-exact Netpbm file I/O.
//!
//! Only binary PGM (P5, maxval 255) and PBM (P4 binary, P1 ascii) are
//! supported. The formats are implemented here directly so that files
//! written on one machine are byte-identical on any other.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// A grayscale image held as real-valued intensities in row-major order.
///
/// Pixel values are nominally in `[0, 255]` but intermediate processing
/// (inverse transforms, attacks before re-quantization) may leave them
/// outside that range. Dimensions must be at least 8 and divisible by 8,
/// which the 8x8 block partitioning relies on throughout.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    height: usize,
    width: usize,
    data: Vec<f64>,
}

impl GrayImage {
    /// Build an image from row-major data. Fails if the dimensions are not
    /// multiples of 8 (minimum 8) or the buffer length does not match.
    pub fn new(height: usize, width: usize, data: Vec<f64>) -> Result<Self> {
        check_dims(height, width)?;
        if data.len() != height * width {
            return Err(Error::Contract(format!(
                "pixel buffer has {} values, expected {}x{}={}",
                data.len(),
                height,
                width,
                height * width
            )));
        }
        Ok(GrayImage {
            height,
            width,
            data,
        })
    }

    /// Constant-valued image.
    pub fn constant(height: usize, width: usize, value: f64) -> Result<Self> {
        Self::new(height, width, vec![value; height * width])
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.data[row * self.width + col] = value;
    }

    /// Number of 8x8 blocks the image partitions into.
    pub fn block_count(&self) -> usize {
        (self.height / 8) * (self.width / 8)
    }

    /// Quantize to 8-bit: round half away from zero, then clip to [0, 255].
    /// This is the exact rule used when writing PGM files.
    pub fn quantize(&self) -> GrayImage {
        let data = self.data.iter().map(|&v| round_clip_u8(v) as f64).collect();
        GrayImage {
            height: self.height,
            width: self.width,
            data,
        }
    }

    /// Read a binary PGM (P5) file with maxval 255.
    pub fn read_pgm(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        let mut cur = Cursor::new(&bytes);

        let magic = cur.token(path)?;
        if magic != b"P5" {
            return Err(Error::format(path, 0, "not a binary PGM (expected magic P5)"));
        }
        let width = cur.number(path, "width")?;
        let height = cur.number(path, "height")?;
        let maxval_at = cur.pos;
        let maxval = cur.number(path, "maxval")?;
        if maxval != 255 {
            return Err(Error::format(
                path,
                maxval_at,
                format!("maxval {maxval} unsupported, only 255"),
            ));
        }
        // Exactly one whitespace byte separates the header from the raster.
        cur.expect_single_whitespace(path)?;
        check_dims(height, width).map_err(|e| Error::format(path, cur.pos, e.to_string()))?;

        let need = width * height;
        let raster = &bytes[cur.pos..];
        if raster.len() < need {
            return Err(Error::format(
                path,
                bytes.len(),
                format!("raster truncated: got {} of {} bytes", raster.len(), need),
            ));
        }
        let data = raster[..need].iter().map(|&b| b as f64).collect();
        GrayImage::new(height, width, data)
    }

    /// Write as binary PGM (P5, maxval 255). Pixels are rounded half away
    /// from zero and clipped to [0, 255]. Deterministic: identical images
    /// produce byte-identical files.
    pub fn write_pgm(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut out = Vec::with_capacity(self.data.len() + 32);
        out.extend_from_slice(format!("P5\n{} {}\n255\n", self.width, self.height).as_bytes());
        out.extend(self.data.iter().map(|&v| round_clip_u8(v)));
        fs::write(path, out).map_err(|e| Error::io(path, e))
    }
}

/// A binary watermark logo: a rows x cols matrix over {0, 1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WatermarkBits {
    rows: usize,
    cols: usize,
    bits: Vec<u8>,
}

impl WatermarkBits {
    pub fn new(rows: usize, cols: usize, bits: Vec<u8>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Contract("watermark dimensions must be positive".into()));
        }
        if bits.len() != rows * cols {
            return Err(Error::Contract(format!(
                "bit buffer has {} values, expected {}x{}={}",
                bits.len(),
                rows,
                cols,
                rows * cols
            )));
        }
        if let Some(bad) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::Contract(format!("watermark bit {bad} is not 0 or 1")));
        }
        Ok(WatermarkBits { rows, cols, bits })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.bits[row * self.cols + col]
    }

    /// Read a PBM logo (P4 binary or P1 ascii). PBM black (1) maps to bit 1.
    pub fn read_pbm(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        let mut cur = Cursor::new(&bytes);
        let magic = cur.token(path)?;
        match magic {
            b"P1" => {
                let cols = cur.number(path, "width")?;
                let rows = cur.number(path, "height")?;
                let mut bits = Vec::with_capacity(rows * cols);
                while bits.len() < rows * cols {
                    match cur.next_significant_byte() {
                        Some(b'0') => bits.push(0),
                        Some(b'1') => bits.push(1),
                        Some(other) => {
                            return Err(Error::format(
                                path,
                                cur.pos - 1,
                                format!("unexpected byte {other:#04x} in P1 data"),
                            ))
                        }
                        None => {
                            return Err(Error::format(
                                path,
                                bytes.len(),
                                format!("P1 data truncated: got {} of {} bits", bits.len(), rows * cols),
                            ))
                        }
                    }
                }
                WatermarkBits::new(rows, cols, bits)
            }
            b"P4" => {
                let cols = cur.number(path, "width")?;
                let rows = cur.number(path, "height")?;
                cur.expect_single_whitespace(path)?;
                let row_bytes = cols.div_ceil(8);
                let need = row_bytes * rows;
                let raster = &bytes[cur.pos..];
                if raster.len() < need {
                    return Err(Error::format(
                        path,
                        bytes.len(),
                        format!("raster truncated: got {} of {} bytes", raster.len(), need),
                    ));
                }
                let mut bits = Vec::with_capacity(rows * cols);
                for r in 0..rows {
                    for c in 0..cols {
                        let byte = raster[r * row_bytes + c / 8];
                        bits.push((byte >> (7 - c % 8)) & 1);
                    }
                }
                WatermarkBits::new(rows, cols, bits)
            }
            _ => Err(Error::format(path, 0, "not a PBM (expected magic P1 or P4)")),
        }
    }

    /// Write as binary PBM (P4). Bit 1 is PBM black.
    pub fn write_pbm(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let row_bytes = self.cols.div_ceil(8);
        let mut out = Vec::with_capacity(self.rows * row_bytes + 32);
        out.extend_from_slice(format!("P4\n{} {}\n", self.cols, self.rows).as_bytes());
        for r in 0..self.rows {
            let mut packed = vec![0u8; row_bytes];
            for c in 0..self.cols {
                if self.get(r, c) == 1 {
                    packed[c / 8] |= 1 << (7 - c % 8);
                }
            }
            out.extend_from_slice(&packed);
        }
        fs::write(path, out).map_err(|e| Error::io(path, e))
    }
}

/// Round half away from zero, clip to [0, 255], as an 8-bit value.
#[inline]
pub fn round_clip_u8(v: f64) -> u8 {
    let rounded = if v >= 0.0 {
        (v + 0.5).floor()
    } else {
        (v - 0.5).ceil()
    };
    rounded.clamp(0.0, 255.0) as u8
}

fn check_dims(height: usize, width: usize) -> Result<()> {
    if height < 8 || width < 8 || height % 8 != 0 || width % 8 != 0 {
        return Err(Error::Contract(format!(
            "image dimensions {height}x{width} must be >= 8 and divisible by 8"
        )));
    }
    Ok(())
}

/// Minimal Netpbm header scanner tracking byte offsets for error reports.
struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Cursor { bytes, pos: 0 }
    }

    /// Skip whitespace and `#` comments (comments run to end of line).
    fn skip_space(&mut self) {
        loop {
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
                self.pos += 1;
            }
            if self.pos < self.bytes.len() && self.bytes[self.pos] == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                return;
            }
        }
    }

    fn token(&mut self, path: &Path) -> Result<&'a [u8]> {
        self.skip_space();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::format(path, start, "unexpected end of header"));
        }
        Ok(&self.bytes[start..self.pos])
    }

    fn number(&mut self, path: &Path, what: &str) -> Result<usize> {
        let at = {
            self.skip_space();
            self.pos
        };
        let tok = self.token(path)?;
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::format(path, at, format!("invalid {what} field")))
    }

    /// After the last header field exactly one whitespace byte precedes the
    /// raster (comments are not allowed at this point by the formats).
    fn expect_single_whitespace(&mut self, path: &Path) -> Result<()> {
        if self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::format(path, self.pos, "missing whitespace before raster"))
        }
    }

    /// Next non-whitespace, non-comment byte (P1 data scanning).
    fn next_significant_byte(&mut self) -> Option<u8> {
        self.skip_space();
        if self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            self.pos += 1;
            Some(b)
        } else {
            None
        }
    }
}
