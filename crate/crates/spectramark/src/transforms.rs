//! Spectral kernels: 2D DFT with magnitude/phase decomposition and the
//! orthonormal 8x8 block DCT.
//!
//! Conventions are load-bearing and must not change:
//! - the forward DFT carries the 1/(MN) normalization, so the DC bin equals
//!   the mean pixel value; the inverse carries none;
//! - the block DCT is orthonormal (per-block energy preserving).
//!
//! Power-of-two dimensions go through an iterative radix-2 FFT; anything
//! else falls back to a direct row-column evaluation, which is fine at the
//! sizes this crate targets.

use crate::error::{Error, Result};
use crate::image::GrayImage;

/// Polar form of a complex DFT plane: magnitude and phase, row-major.
/// Magnitudes are non-negative; phases lie in (-pi, pi].
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub height: usize,
    pub width: usize,
    pub magnitude: Vec<f64>,
    pub phase: Vec<f64>,
}

impl Spectrum {
    /// Real and imaginary parts of bin (u, v): `M cos(phi)`, `M sin(phi)`.
    pub fn complex_at(&self, u: usize, v: usize) -> (f64, f64) {
        let i = u * self.width + v;
        (
            self.magnitude[i] * self.phase[i].cos(),
            self.magnitude[i] * self.phase[i].sin(),
        )
    }
}

/// Forward 2D DFT. The DC bin of the result equals the mean pixel value.
pub fn dft2(img: &GrayImage) -> Spectrum {
    dft2_matrix(img.data(), img.height(), img.width())
}

/// [`dft2`] over a raw row-major matrix of any dimensions (no 8x8
/// alignment requirement here; that constraint belongs to the blocked DCT).
pub fn dft2_matrix(data: &[f64], h: usize, w: usize) -> Spectrum {
    assert_eq!(data.len(), h * w, "matrix buffer does not match dimensions");
    let mut re: Vec<f64> = data.to_vec();
    let mut im = vec![0.0; h * w];
    fft2_in_place(&mut re, &mut im, h, w, false);
    let norm = 1.0 / (h * w) as f64;
    let mut magnitude = Vec::with_capacity(h * w);
    let mut phase = Vec::with_capacity(h * w);
    for i in 0..h * w {
        let (r, q) = (re[i] * norm, im[i] * norm);
        magnitude.push(r.hypot(q));
        phase.push(q.atan2(r));
    }
    Spectrum {
        height: h,
        width: w,
        magnitude,
        phase,
    }
}

/// Inverse 2D DFT (no normalization on this side); returns the real part
/// as an image-shaped matrix without any clipping or rounding.
pub fn idft2(spec: &Spectrum) -> GrayImage {
    let data = idft2_matrix(spec);
    GrayImage::new(spec.height, spec.width, data)
        .expect("spectrum dimensions are valid image dimensions")
}

/// [`idft2`] returning the raw real-part matrix, usable for spectra whose
/// dimensions are not valid image dimensions.
pub fn idft2_matrix(spec: &Spectrum) -> Vec<f64> {
    let (h, w) = (spec.height, spec.width);
    let mut re = Vec::with_capacity(h * w);
    let mut im = Vec::with_capacity(h * w);
    for i in 0..h * w {
        re.push(spec.magnitude[i] * spec.phase[i].cos());
        im.push(spec.magnitude[i] * spec.phase[i].sin());
    }
    fft2_in_place(&mut re, &mut im, h, w, true);
    re
}

fn fft2_in_place(re: &mut [f64], im: &mut [f64], h: usize, w: usize, inverse: bool) {
    let mut row_re = vec![0.0; w];
    let mut row_im = vec![0.0; w];
    for r in 0..h {
        row_re.copy_from_slice(&re[r * w..(r + 1) * w]);
        row_im.copy_from_slice(&im[r * w..(r + 1) * w]);
        fft_1d(&mut row_re, &mut row_im, inverse);
        re[r * w..(r + 1) * w].copy_from_slice(&row_re);
        im[r * w..(r + 1) * w].copy_from_slice(&row_im);
    }
    let mut col_re = vec![0.0; h];
    let mut col_im = vec![0.0; h];
    for c in 0..w {
        for r in 0..h {
            col_re[r] = re[r * w + c];
            col_im[r] = im[r * w + c];
        }
        fft_1d(&mut col_re, &mut col_im, inverse);
        for r in 0..h {
            re[r * w + c] = col_re[r];
            im[r * w + c] = col_im[r];
        }
    }
}

/// Unnormalized 1D transform: plain sum with e^{-j...} forward, e^{+j...}
/// inverse. Radix-2 when the length is a power of two, direct otherwise.
fn fft_1d(re: &mut [f64], im: &mut [f64], inverse: bool) {
    let n = re.len();
    if n <= 1 {
        return;
    }
    if n.is_power_of_two() {
        fft_radix2(re, im, inverse);
    } else {
        dft_direct(re, im, inverse);
    }
}

fn fft_radix2(re: &mut [f64], im: &mut [f64], inverse: bool) {
    let n = re.len();
    // Bit-reversal permutation.
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            re.swap(i, j);
            im.swap(i, j);
        }
    }
    let sign = if inverse { 1.0 } else { -1.0 };
    let mut len = 2;
    while len <= n {
        let angle = sign * 2.0 * std::f64::consts::PI / len as f64;
        let (w_re, w_im) = (angle.cos(), angle.sin());
        for start in (0..n).step_by(len) {
            let mut cur_re = 1.0;
            let mut cur_im = 0.0;
            for k in 0..len / 2 {
                let a = start + k;
                let b = a + len / 2;
                let t_re = re[b] * cur_re - im[b] * cur_im;
                let t_im = re[b] * cur_im + im[b] * cur_re;
                re[b] = re[a] - t_re;
                im[b] = im[a] - t_im;
                re[a] += t_re;
                im[a] += t_im;
                let next_re = cur_re * w_re - cur_im * w_im;
                cur_im = cur_re * w_im + cur_im * w_re;
                cur_re = next_re;
            }
        }
        len <<= 1;
    }
}

fn dft_direct(re: &mut [f64], im: &mut [f64], inverse: bool) {
    let n = re.len();
    let sign = if inverse { 1.0 } else { -1.0 };
    let mut out_re = vec![0.0; n];
    let mut out_im = vec![0.0; n];
    for (k, (or, oi)) in out_re.iter_mut().zip(out_im.iter_mut()).enumerate() {
        for t in 0..n {
            let angle = sign * 2.0 * std::f64::consts::PI * (k * t) as f64 / n as f64;
            let (c, s) = (angle.cos(), angle.sin());
            *or += re[t] * c - im[t] * s;
            *oi += re[t] * s + im[t] * c;
        }
    }
    re.copy_from_slice(&out_re);
    im.copy_from_slice(&out_im);
}

/// The coefficients of an image partitioned into 8x8 tiles and transformed
/// with the orthonormal 2D DCT, tile by tile.
#[derive(Debug, Clone)]
pub struct DctBlockGrid {
    pub block_rows: usize,
    pub block_cols: usize,
    /// Per-block 8x8 coefficient tiles, row-major blocks, row-major within.
    pub blocks: Vec<[f64; 64]>,
}

impl DctBlockGrid {
    #[inline]
    pub fn block(&self, r: usize, c: usize) -> &[f64; 64] {
        &self.blocks[r * self.block_cols + c]
    }

    #[inline]
    pub fn block_mut(&mut self, r: usize, c: usize) -> &mut [f64; 64] {
        &mut self.blocks[r * self.block_cols + c]
    }
}

/// 1D orthonormal DCT-II basis for length 8: `BASIS[u][x]`.
fn dct_basis() -> &'static [[f64; 8]; 8] {
    use std::sync::OnceLock;
    static BASIS: OnceLock<[[f64; 8]; 8]> = OnceLock::new();
    BASIS.get_or_init(|| {
        let mut basis = [[0.0; 8]; 8];
        for (u, row) in basis.iter_mut().enumerate() {
            let scale = if u == 0 { (1.0f64 / 8.0).sqrt() } else { (2.0f64 / 8.0).sqrt() };
            for (x, v) in row.iter_mut().enumerate() {
                *v = scale * ((2 * x + 1) as f64 * u as f64 * std::f64::consts::PI / 16.0).cos();
            }
        }
        basis
    })
}

/// Forward block DCT of a row-major real matrix whose dimensions are
/// multiples of 8.
pub fn dct2_blocks(data: &[f64], height: usize, width: usize) -> Result<DctBlockGrid> {
    if height % 8 != 0 || width % 8 != 0 || data.len() != height * width {
        return Err(Error::Contract(format!(
            "block DCT needs dimensions divisible by 8, got {height}x{width} with {} values",
            data.len()
        )));
    }
    let basis = dct_basis();
    let (block_rows, block_cols) = (height / 8, width / 8);
    let mut blocks = Vec::with_capacity(block_rows * block_cols);
    let mut tile = [0.0f64; 64];
    let mut tmp = [0.0f64; 64];
    for br in 0..block_rows {
        for bc in 0..block_cols {
            for y in 0..8 {
                let row = &data[(br * 8 + y) * width + bc * 8..][..8];
                tile[y * 8..y * 8 + 8].copy_from_slice(row);
            }
            // rows then columns: C = B * tile * B^T
            for u in 0..8 {
                for y in 0..8 {
                    let mut acc = 0.0;
                    for x in 0..8 {
                        acc += basis[u][x] * tile[x * 8 + y];
                    }
                    tmp[u * 8 + y] = acc;
                }
            }
            let mut out = [0.0f64; 64];
            for u in 0..8 {
                for v in 0..8 {
                    let mut acc = 0.0;
                    for y in 0..8 {
                        acc += tmp[u * 8 + y] * basis[v][y];
                    }
                    out[u * 8 + v] = acc;
                }
            }
            blocks.push(out);
        }
    }
    Ok(DctBlockGrid {
        block_rows,
        block_cols,
        blocks,
    })
}

/// Inverse of [`dct2_blocks`]; returns the row-major real matrix.
pub fn idct2_blocks(grid: &DctBlockGrid) -> Vec<f64> {
    let basis = dct_basis();
    let (height, width) = (grid.block_rows * 8, grid.block_cols * 8);
    let mut data = vec![0.0; height * width];
    let mut tmp = [0.0f64; 64];
    for br in 0..grid.block_rows {
        for bc in 0..grid.block_cols {
            let tile = grid.block(br, bc);
            // x then y: f = B^T * C * B
            for x in 0..8 {
                for v in 0..8 {
                    let mut acc = 0.0;
                    for u in 0..8 {
                        acc += basis[u][x] * tile[u * 8 + v];
                    }
                    tmp[x * 8 + v] = acc;
                }
            }
            for x in 0..8 {
                for y in 0..8 {
                    let mut acc = 0.0;
                    for v in 0..8 {
                        acc += tmp[x * 8 + v] * basis[v][y];
                    }
                    data[(br * 8 + x) * width + bc * 8 + y] = acc;
                }
            }
        }
    }
    data
}

/// The 22 mid-band coefficient positions of an 8x8 DCT tile, row-major:
/// all (u, v) with 6 <= u+v <= 8. Excludes the DC corner and the highest
/// frequencies, balancing visibility against compression survival.
pub fn midband_mask() -> Vec<(usize, usize)> {
    let mut mask = Vec::with_capacity(22);
    for u in 0..8 {
        for v in 0..8 {
            if (6..=8).contains(&(u + v)) {
                mask.push((u, v));
            }
        }
    }
    debug_assert_eq!(mask.len(), 22);
    mask
}
