//! Attack battery for robustness evaluation.
//!
//! Every attack maps an image to an image of the same dimensions with
//! 8-bit-quantized pixels. Stochastic attacks take an explicit seed and are
//! byte-reproducible. Specs serialize to compact text tokens, e.g.
//! `gn:var=0.001,seed=7`, `jpeg:qf=90`, `crop:frac=0.25,anchor=tl`,
//! `chain:[he|gn:var=0.001,seed=7]`; the token grammar doubles as the
//! benchmark config format.

use crate::error::{Error, Result};
use crate::image::{round_clip_u8, GrayImage};
use crate::pn::XorShift64Star;
use crate::transforms::{dct2_blocks, idct2_blocks};

/// Where the cropped-out rectangle sits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CropAnchor {
    TopLeft,
    Center,
}

/// A parsed, validated attack specification.
#[derive(Debug, Clone, PartialEq)]
pub enum Attack {
    /// Additive zero-mean Gaussian noise; `variance` on the unit pixel
    /// scale (the usual imnoise convention).
    GaussianNoise { variance: f64, seed: u64 },
    /// Salt & pepper impulse noise with the given corruption probability.
    SaltPepper { density: f64, seed: u64 },
    /// Low-pass Gaussian filtering.
    GaussianLowpass { sigma: f64, window: usize },
    /// Gaussian smoothing. Same kernel as the low-pass filter; kept as a
    /// separate spec so reports can mirror both attack families.
    GaussianSmooth { sigma: f64, window: usize },
    HistogramEq,
    /// Baseline JPEG quantization at the given quality factor.
    Jpeg { quality: u32 },
    /// Zero out a rectangle covering `fraction` of the image area.
    Crop { fraction: f64, anchor: CropAnchor },
    /// Rotation about the center, bilinear, same-size output.
    Rotate { degrees: f64 },
    /// Left-to-right composition.
    Chain(Vec<Attack>),
}

impl Attack {
    /// Apply the attack, returning an 8-bit-quantized image of the same
    /// dimensions.
    pub fn apply(&self, img: &GrayImage) -> GrayImage {
        match self {
            Attack::GaussianNoise { variance, seed } => gaussian_noise(img, *variance, *seed),
            Attack::SaltPepper { density, seed } => salt_pepper(img, *density, *seed),
            Attack::GaussianLowpass { sigma, window } | Attack::GaussianSmooth { sigma, window } => {
                gaussian_blur(img, *sigma, *window)
            }
            Attack::HistogramEq => histogram_equalize(img),
            Attack::Jpeg { quality } => jpeg_attack(img, *quality),
            Attack::Crop { fraction, anchor } => crop_attack(img, *fraction, *anchor),
            Attack::Rotate { degrees } => rotate_attack(img, *degrees),
            Attack::Chain(list) => apply_chain(img, list),
        }
    }
}

/// Additive Gaussian noise: pixel' = clip(round(pixel + 255 * eps)), with
/// eps ~ N(0, variance) drawn by Box-Muller from the pinned generator in
/// row-major pixel order.
pub fn gaussian_noise(img: &GrayImage, variance: f64, seed: u64) -> GrayImage {
    assert!(variance > 0.0 && variance <= 1.0, "variance must be in (0, 1]");
    let sigma = 255.0 * variance.sqrt();
    let mut rng = XorShift64Star::new(seed);
    let mut cache = None;
    let data = img
        .data()
        .iter()
        .map(|&v| round_clip_u8(v + sigma * rng.next_gaussian(&mut cache)) as f64)
        .collect();
    GrayImage::new(img.height(), img.width(), data).expect("dimensions preserved")
}

/// Impulse noise: each pixel is independently corrupted with probability
/// `density`; corrupted pixels become 0 or 255 with equal probability.
pub fn salt_pepper(img: &GrayImage, density: f64, seed: u64) -> GrayImage {
    assert!(density > 0.0 && density <= 1.0, "density must be in (0, 1]");
    let mut rng = XorShift64Star::new(seed);
    let data = img
        .data()
        .iter()
        .map(|&v| {
            if rng.next_unit() < density {
                if rng.next_unit() < 0.5 {
                    255.0
                } else {
                    0.0
                }
            } else {
                round_clip_u8(v) as f64
            }
        })
        .collect();
    GrayImage::new(img.height(), img.width(), data).expect("dimensions preserved")
}

/// Normalized Gaussian kernel sampled on `window x window`, convolved with
/// mirrored boundaries. Serves both the low-pass filtering and smoothing
/// attack families.
pub fn gaussian_blur(img: &GrayImage, sigma: f64, window: usize) -> GrayImage {
    assert!(sigma > 0.0, "sigma must be positive");
    assert!(
        matches!(window, 3 | 5 | 7 | 9),
        "window must be one of 3, 5, 7, 9"
    );
    let kernel = blur_kernel(sigma, window);
    let half = (window / 2) as isize;
    let (h, w) = (img.height() as isize, img.width() as isize);
    let mirror = |mut i: isize, n: isize| -> usize {
        if i < 0 {
            i = -i - 1;
        }
        if i >= n {
            i = 2 * n - 1 - i;
        }
        i as usize
    };
    let mut data = vec![0.0; (h * w) as usize];
    for r in 0..h {
        for c in 0..w {
            let mut acc = 0.0;
            for dy in -half..=half {
                for dx in -half..=half {
                    let weight = kernel[((dy + half) * window as isize + dx + half) as usize];
                    acc += weight * img.get(mirror(r + dy, h), mirror(c + dx, w));
                }
            }
            data[(r * w + c) as usize] = round_clip_u8(acc) as f64;
        }
    }
    GrayImage::new(img.height(), img.width(), data).expect("dimensions preserved")
}

/// `G(x, y) ~ exp(-(x^2+y^2) / (2 sigma^2))`, normalized to sum 1.
pub fn blur_kernel(sigma: f64, window: usize) -> Vec<f64> {
    let half = (window / 2) as isize;
    let mut kernel = Vec::with_capacity(window * window);
    let mut sum = 0.0;
    for dy in -half..=half {
        for dx in -half..=half {
            let v = (-((dy * dy + dx * dx) as f64) / (2.0 * sigma * sigma)).exp();
            kernel.push(v);
            sum += v;
        }
    }
    for v in &mut kernel {
        *v /= sum;
    }
    kernel
}

/// 256-bin histogram equalization with the min-anchored CDF form, so the
/// darkest occupied bin maps to 0. A constant image degenerates to 0.
pub fn histogram_equalize(img: &GrayImage) -> GrayImage {
    let mut hist = [0u64; 256];
    for &v in img.data() {
        hist[round_clip_u8(v) as usize] += 1;
    }
    let mut cdf = [0u64; 256];
    let mut running = 0;
    for (i, &count) in hist.iter().enumerate() {
        running += count;
        cdf[i] = running;
    }
    let cdf_min = hist
        .iter()
        .position(|&c| c > 0)
        .map(|i| cdf[i])
        .unwrap_or(0);
    let total = img.data().len() as u64;
    let denom = total - cdf_min;
    let mut lut = [0.0f64; 256];
    if denom > 0 {
        for i in 0..256 {
            let num = cdf[i].saturating_sub(cdf_min) as f64;
            lut[i] = round_clip_u8(255.0 * num / denom as f64) as f64;
        }
    }
    let data = img
        .data()
        .iter()
        .map(|&v| lut[round_clip_u8(v) as usize])
        .collect();
    GrayImage::new(img.height(), img.width(), data).expect("dimensions preserved")
}

/// JPEG Annex-K luminance quantization table.
const JPEG_LUMA_Q: [f64; 64] = [
    16.0, 11.0, 10.0, 16.0, 24.0, 40.0, 51.0, 61.0, //
    12.0, 12.0, 14.0, 19.0, 26.0, 58.0, 60.0, 55.0, //
    14.0, 13.0, 16.0, 24.0, 40.0, 57.0, 69.0, 56.0, //
    14.0, 17.0, 22.0, 29.0, 51.0, 87.0, 80.0, 62.0, //
    18.0, 22.0, 37.0, 56.0, 68.0, 109.0, 103.0, 77.0, //
    24.0, 35.0, 55.0, 64.0, 81.0, 104.0, 113.0, 92.0, //
    49.0, 64.0, 78.0, 87.0, 103.0, 121.0, 120.0, 101.0, //
    72.0, 92.0, 95.0, 98.0, 112.0, 100.0, 103.0, 99.0,
];

/// The libjpeg quality scaling: QF < 50 uses 5000/QF, else 200 - 2*QF;
/// entries become `clip(floor((q * scale + 50) / 100), 1, 255)`.
pub fn jpeg_quant_table(quality: u32) -> [f64; 64] {
    assert!((1..=99).contains(&quality), "quality factor must be in [1, 99]");
    let scale = if quality < 50 {
        5000.0 / quality as f64
    } else {
        200.0 - 2.0 * quality as f64
    };
    let mut table = [0.0; 64];
    for (t, &q) in table.iter_mut().zip(JPEG_LUMA_Q.iter()) {
        *t = ((q * scale + 50.0) / 100.0).floor().clamp(1.0, 255.0);
    }
    table
}

/// Baseline-JPEG luminance simulation: level shift, 8x8 block DCT,
/// quantize/dequantize with the scaled table, inverse, shift back. Entropy
/// coding is lossless and therefore omitted; pixel effects are identical.
pub fn jpeg_attack(img: &GrayImage, quality: u32) -> GrayImage {
    let table = jpeg_quant_table(quality);
    let shifted: Vec<f64> = img.data().iter().map(|v| v - 128.0).collect();
    let mut grid = dct2_blocks(&shifted, img.height(), img.width())
        .expect("image dimensions are multiples of 8");
    for block in &mut grid.blocks {
        for (c, &q) in block.iter_mut().zip(table.iter()) {
            *c = (*c / q).round() * q;
        }
    }
    let data = idct2_blocks(&grid)
        .into_iter()
        .map(|v| round_clip_u8(v + 128.0) as f64)
        .collect();
    GrayImage::new(img.height(), img.width(), data).expect("dimensions preserved")
}

/// Zero a rectangle of `fraction` of the image area, aspect ratio matching
/// the image, at the given anchor. Image size is unchanged.
pub fn crop_attack(img: &GrayImage, fraction: f64, anchor: CropAnchor) -> GrayImage {
    assert!(fraction > 0.0 && fraction < 1.0, "fraction must be in (0, 1)");
    let (h, w) = (img.height(), img.width());
    let ch = ((h as f64) * fraction.sqrt()).round() as usize;
    let cw = ((w as f64) * fraction.sqrt()).round() as usize;
    let (r0, c0) = match anchor {
        CropAnchor::TopLeft => (0, 0),
        CropAnchor::Center => ((h - ch) / 2, (w - cw) / 2),
    };
    let mut out = img.quantize();
    for r in r0..(r0 + ch).min(h) {
        for c in c0..(c0 + cw).min(w) {
            out.set(r, c, 0.0);
        }
    }
    out
}

/// Rotate about the image center with bilinear interpolation; the output
/// keeps the input size and out-of-range samples are 0. No resynchronization
/// is performed anywhere downstream.
pub fn rotate_attack(img: &GrayImage, degrees: f64) -> GrayImage {
    assert!(degrees.abs() <= 45.0, "|angle| must be at most 45 degrees");
    let theta = degrees.to_radians();
    let (sin_t, cos_t) = theta.sin_cos();
    let (h, w) = (img.height(), img.width());
    let cy = (h as f64 - 1.0) / 2.0;
    let cx = (w as f64 - 1.0) / 2.0;
    let sample = |y: isize, x: isize| -> f64 {
        if y >= 0 && (y as usize) < h && x >= 0 && (x as usize) < w {
            img.get(y as usize, x as usize)
        } else {
            0.0
        }
    };
    let mut data = vec![0.0; h * w];
    for r in 0..h {
        for c in 0..w {
            let dy = r as f64 - cy;
            let dx = c as f64 - cx;
            let ys = cy + dy * cos_t - dx * sin_t;
            let xs = cx + dy * sin_t + dx * cos_t;
            let y0 = ys.floor();
            let x0 = xs.floor();
            let fy = ys - y0;
            let fx = xs - x0;
            let (y0, x0) = (y0 as isize, x0 as isize);
            let v = sample(y0, x0) * (1.0 - fy) * (1.0 - fx)
                + sample(y0, x0 + 1) * (1.0 - fy) * fx
                + sample(y0 + 1, x0) * fy * (1.0 - fx)
                + sample(y0 + 1, x0 + 1) * fy * fx;
            data[r * w + c] = round_clip_u8(v) as f64;
        }
    }
    GrayImage::new(h, w, data).expect("dimensions preserved")
}

/// Apply attacks left to right. An empty chain is the identity (modulo
/// 8-bit quantization).
pub fn apply_chain(img: &GrayImage, attacks: &[Attack]) -> GrayImage {
    let mut cur = img.quantize();
    for atk in attacks {
        cur = atk.apply(&cur);
    }
    cur
}

/// Parse an attack token. Grammar (kind:key=value,... with `chain:[a|b]`):
///
/// ```text
/// gn:var=<f>,seed=<u64>       gaussian noise
/// spn:density=<f>,seed=<u64>  salt & pepper
/// lpgf:sigma=<f>,window=<n>   low-pass gaussian filter
/// gs:sigma=<f>,window=<n>     gaussian smoothing
/// he                          histogram equalization
/// jpeg:qf=<n>                 jpeg quantization
/// crop:frac=<f>[,anchor=tl|center]
/// rot:angle=<f>
/// chain:[tok|tok|...]
/// ```
pub fn parse_attack_token(token: &str) -> Result<Attack> {
    let bad = |position: usize, reason: &str| Error::Token {
        token: token.to_string(),
        position,
        reason: reason.to_string(),
    };
    let trimmed = token.trim();
    let (kind, rest) = match trimmed.find(':') {
        Some(i) => (&trimmed[..i], Some(&trimmed[i + 1..])),
        None => (trimmed, None),
    };
    let kind_len = kind.len() + 1;

    // Key=value parameter list for the simple kinds.
    let params = |rest: Option<&str>| -> Result<Vec<(String, String)>> {
        let Some(rest) = rest else {
            return Ok(Vec::new());
        };
        let mut out = Vec::new();
        let mut offset = kind_len;
        for piece in rest.split(',') {
            let eq = piece
                .find('=')
                .ok_or_else(|| bad(offset, "expected key=value"))?;
            out.push((piece[..eq].trim().to_string(), piece[eq + 1..].trim().to_string()));
            offset += piece.len() + 1;
        }
        Ok(out)
    };
    let lookup = |pairs: &[(String, String)], key: &str| -> Option<String> {
        pairs.iter().find(|(k, _)| k == key).map(|(_, v)| v.clone())
    };
    let require_f64 = |pairs: &[(String, String)], key: &str| -> Result<f64> {
        lookup(pairs, key)
            .ok_or_else(|| bad(kind_len, &format!("missing parameter '{key}'")))?
            .parse()
            .map_err(|_| bad(kind_len, &format!("parameter '{key}' is not a number")))
    };
    let require_u64 = |pairs: &[(String, String)], key: &str| -> Result<u64> {
        let raw = lookup(pairs, key)
            .ok_or_else(|| bad(kind_len, &format!("missing parameter '{key}'")))?;
        crate::cli::parse_key(&raw).map_err(|_| bad(kind_len, &format!("parameter '{key}' is not an integer")))
    };

    match kind {
        "gn" => {
            let p = params(rest)?;
            let variance = require_f64(&p, "var")?;
            if !(variance > 0.0 && variance <= 1.0) {
                return Err(bad(kind_len, "var must be in (0, 1]"));
            }
            Ok(Attack::GaussianNoise {
                variance,
                seed: require_u64(&p, "seed")?,
            })
        }
        "spn" => {
            let p = params(rest)?;
            let density = require_f64(&p, "density")?;
            if !(density > 0.0 && density <= 1.0) {
                return Err(bad(kind_len, "density must be in (0, 1]"));
            }
            Ok(Attack::SaltPepper {
                density,
                seed: require_u64(&p, "seed")?,
            })
        }
        "lpgf" | "gs" => {
            let p = params(rest)?;
            let sigma = require_f64(&p, "sigma")?;
            let window = require_f64(&p, "window")? as usize;
            if sigma <= 0.0 {
                return Err(bad(kind_len, "sigma must be positive"));
            }
            if !matches!(window, 3 | 5 | 7 | 9) {
                return Err(bad(kind_len, "window must be 3, 5, 7 or 9"));
            }
            if kind == "lpgf" {
                Ok(Attack::GaussianLowpass { sigma, window })
            } else {
                Ok(Attack::GaussianSmooth { sigma, window })
            }
        }
        "he" => {
            if rest.is_some() {
                return Err(bad(kind_len, "he takes no parameters"));
            }
            Ok(Attack::HistogramEq)
        }
        "jpeg" => {
            let p = params(rest)?;
            let qf = require_f64(&p, "qf")? as u32;
            if !(1..=99).contains(&qf) {
                return Err(bad(kind_len, "qf must be in [1, 99]"));
            }
            Ok(Attack::Jpeg { quality: qf })
        }
        "crop" => {
            let p = params(rest)?;
            let fraction = require_f64(&p, "frac")?;
            if !(fraction > 0.0 && fraction < 1.0) {
                return Err(bad(kind_len, "frac must be in (0, 1)"));
            }
            let anchor = match lookup(&p, "anchor").as_deref() {
                None | Some("tl") => CropAnchor::TopLeft,
                Some("center") => CropAnchor::Center,
                Some(_) => return Err(bad(kind_len, "anchor must be 'tl' or 'center'")),
            };
            Ok(Attack::Crop { fraction, anchor })
        }
        "rot" => {
            let p = params(rest)?;
            let degrees = require_f64(&p, "angle")?;
            if degrees.abs() > 45.0 {
                return Err(bad(kind_len, "|angle| must be at most 45"));
            }
            Ok(Attack::Rotate { degrees })
        }
        "chain" => {
            let rest = rest.ok_or_else(|| bad(kind_len, "chain needs [tok|tok|...]"))?;
            if !rest.starts_with('[') || !rest.ends_with(']') {
                return Err(bad(kind_len, "chain needs [tok|tok|...]"));
            }
            let inner = &rest[1..rest.len() - 1];
            let mut list = Vec::new();
            if !inner.trim().is_empty() {
                for piece in inner.split('|') {
                    list.push(parse_attack_token(piece)?);
                }
            }
            Ok(Attack::Chain(list))
        }
        other => Err(bad(0, &format!("unknown attack kind '{other}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics;

    fn test_image(seed: u64) -> GrayImage {
        let mut rng = XorShift64Star::new(seed);
        let mut data = vec![0.0; 64 * 64];
        // smooth-ish content plus texture
        for r in 0..64 {
            for c in 0..64 {
                data[r * 64 + c] = 100.0
                    + 60.0 * ((r as f64 / 17.0).sin() * (c as f64 / 13.0).cos())
                    + 10.0 * (rng.next_unit() - 0.5);
            }
        }
        GrayImage::new(64, 64, data.iter().map(|&v| round_clip_u8(v) as f64).collect()).unwrap()
    }

    #[test]
    fn gaussian_noise_tiny_variance_is_gentle() {
        let img = test_image(1);
        let out = gaussian_noise(&img, 1e-12, 7);
        for (a, b) in img.data().iter().zip(out.data()) {
            assert!((a - b).abs() <= 1.0);
        }
    }

    #[test]
    fn gaussian_noise_empirical_variance() {
        let img = GrayImage::constant(512, 512, 128.0).unwrap();
        let out = gaussian_noise(&img, 0.001, 99);
        let var: f64 = out
            .data()
            .iter()
            .zip(img.data())
            .map(|(a, b)| ((a - b) / 255.0).powi(2))
            .sum::<f64>()
            / (512.0 * 512.0);
        assert!((0.0009..=0.0011).contains(&var), "unit-scale variance {var}");
    }

    #[test]
    fn salt_pepper_density_and_values() {
        let img = GrayImage::constant(512, 512, 128.0).unwrap();
        let out = salt_pepper(&img, 0.01, 5);
        let changed = out
            .data()
            .iter()
            .filter(|&&v| v != 128.0)
            .inspect(|&&v| assert!(v == 0.0 || v == 255.0))
            .count();
        let expect = 0.01 * 512.0 * 512.0;
        assert!(
            (changed as f64) > expect * 0.8 && (changed as f64) < expect * 1.2,
            "changed {changed} vs expected {expect}"
        );
    }

    #[test]
    fn salt_pepper_full_density() {
        let img = GrayImage::constant(8, 8, 128.0).unwrap();
        let out = salt_pepper(&img, 1.0, 3);
        assert!(out.data().iter().all(|&v| v == 0.0 || v == 255.0));
    }

    #[test]
    fn blur_kernel_reference_values() {
        // sigma = 0.5, 3x3: center 0.6193, edge 0.0838, corner 0.0113.
        let k = blur_kernel(0.5, 3);
        assert!((k[4] - 0.6193).abs() < 5e-4, "center {}", k[4]);
        assert!((k[1] - 0.0838).abs() < 5e-4, "edge {}", k[1]);
        assert!((k[0] - 0.0113).abs() < 5e-4, "corner {}", k[0]);
    }

    #[test]
    fn blur_preserves_constant() {
        let img = GrayImage::constant(16, 16, 200.0).unwrap();
        let out = gaussian_blur(&img, 0.5, 3);
        assert!(out.data().iter().all(|&v| v == 200.0));
    }

    #[test]
    fn histogram_eq_two_level_fixed_point() {
        let mut data = vec![0.0; 64];
        data[32..].fill(255.0);
        let img = GrayImage::new(8, 8, data).unwrap();
        let out = histogram_equalize(&img);
        assert_eq!(img.data(), out.data());
    }

    #[test]
    fn histogram_eq_constant_degenerates_to_zero() {
        let img = GrayImage::constant(8, 8, 170.0).unwrap();
        let out = histogram_equalize(&img);
        assert!(out.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn jpeg_quant_table_scaling() {
        let t50 = jpeg_quant_table(50);
        assert_eq!(t50[0], 16.0); // scale 100 keeps the base table
        let t90 = jpeg_quant_table(90);
        assert!(t90[0] <= 4.0);
        let t10 = jpeg_quant_table(10);
        assert!(t10[63] > JPEG_LUMA_Q[63]);
    }

    #[test]
    fn jpeg_high_quality_nearly_lossless() {
        let img = test_image(2);
        let out = jpeg_attack(&img, 99);
        let p = metrics::psnr(&img, &out).unwrap();
        assert!(p >= 45.0, "psnr {p}");
    }

    #[test]
    fn jpeg_monotone_distortion() {
        let img = test_image(3);
        let mse_at = |qf| metrics::mse(&img, &jpeg_attack(&img, qf)).unwrap();
        assert!(mse_at(10) >= mse_at(50));
        assert!(mse_at(50) >= mse_at(90));
    }

    #[test]
    fn crop_quarter_geometry() {
        let img = GrayImage::constant(512, 512, 90.0).unwrap();
        let out = crop_attack(&img, 0.25, CropAnchor::TopLeft);
        for r in 0..512 {
            for c in 0..512 {
                let expect = if r < 256 && c < 256 { 0.0 } else { 90.0 };
                assert_eq!(out.get(r, c), expect, "pixel ({r},{c})");
            }
        }
    }

    #[test]
    fn crop_center_anchor() {
        let img = GrayImage::constant(16, 16, 90.0).unwrap();
        let out = crop_attack(&img, 0.25, CropAnchor::Center);
        let zeros = out.data().iter().filter(|&&v| v == 0.0).count();
        assert_eq!(zeros, 64);
        assert_eq!(out.get(7, 7), 0.0);
        assert_eq!(out.get(0, 0), 90.0);
    }

    #[test]
    fn rotate_zero_is_identity() {
        let img = test_image(4);
        let out = rotate_attack(&img, 0.0);
        assert_eq!(img.data(), out.data());
    }

    #[test]
    fn rotate_preserves_dimensions_and_range() {
        let img = test_image(5);
        let out = rotate_attack(&img, 7.5);
        assert_eq!(out.height(), 64);
        assert_eq!(out.width(), 64);
        assert!(out.data().iter().all(|&v| (0.0..=255.0).contains(&v)));
    }

    #[test]
    fn empty_chain_is_identity_on_quantized() {
        let img = test_image(6);
        let out = apply_chain(&img, &[]);
        assert_eq!(out.data(), img.quantize().data());
    }

    #[test]
    fn stochastic_attacks_reproducible() {
        let img = test_image(7);
        let a = gaussian_noise(&img, 0.01, 1234);
        let b = gaussian_noise(&img, 0.01, 1234);
        assert_eq!(a.data(), b.data());
        let c = salt_pepper(&img, 0.05, 77);
        let d = salt_pepper(&img, 0.05, 77);
        assert_eq!(c.data(), d.data());
    }

    #[test]
    fn token_grammar_roundtrip() {
        let cases = [
            ("gn:var=0.001,seed=7", Attack::GaussianNoise { variance: 0.001, seed: 7 }),
            ("spn:density=0.01,seed=3", Attack::SaltPepper { density: 0.01, seed: 3 }),
            ("lpgf:sigma=0.5,window=9", Attack::GaussianLowpass { sigma: 0.5, window: 9 }),
            ("gs:sigma=0.6,window=3", Attack::GaussianSmooth { sigma: 0.6, window: 3 }),
            ("he", Attack::HistogramEq),
            ("jpeg:qf=90", Attack::Jpeg { quality: 90 }),
            (
                "crop:frac=0.25",
                Attack::Crop { fraction: 0.25, anchor: CropAnchor::TopLeft },
            ),
            (
                "crop:frac=0.5,anchor=center",
                Attack::Crop { fraction: 0.5, anchor: CropAnchor::Center },
            ),
            ("rot:angle=0.25", Attack::Rotate { degrees: 0.25 }),
        ];
        for (tok, want) in cases {
            assert_eq!(parse_attack_token(tok).unwrap(), want, "token {tok}");
        }
        let chain = parse_attack_token("chain:[he|gn:var=0.001,seed=7]").unwrap();
        assert_eq!(
            chain,
            Attack::Chain(vec![
                Attack::HistogramEq,
                Attack::GaussianNoise { variance: 0.001, seed: 7 },
            ])
        );
    }

    #[test]
    fn token_errors_cite_token() {
        for tok in ["zap:qf=1", "jpeg:qf=0", "jpeg:qf=100", "gn:var=2,seed=1", "crop:frac=1.0", "rot:angle=90"] {
            match parse_attack_token(tok) {
                Err(Error::Token { token, .. }) => assert_eq!(token, tok),
                other => panic!("token {tok}: expected parse error, got {other:?}"),
            }
        }
    }

    #[test]
    fn attacks_preserve_dims_and_8bit_range() {
        let img = test_image(8);
        let attacks = [
            Attack::GaussianNoise { variance: 0.01, seed: 5 },
            Attack::SaltPepper { density: 0.02, seed: 6 },
            Attack::GaussianLowpass { sigma: 0.5, window: 5 },
            Attack::HistogramEq,
            Attack::Jpeg { quality: 40 },
            Attack::Crop { fraction: 0.3, anchor: CropAnchor::TopLeft },
            Attack::Rotate { degrees: -2.0 },
        ];
        for atk in attacks {
            let out = atk.apply(&img);
            assert_eq!((out.height(), out.width()), (64, 64), "{atk:?}");
            assert!(
                out.data().iter().all(|&v| (0.0..=255.0).contains(&v) && v.fract() == 0.0),
                "{atk:?} left non-8-bit pixels"
            );
        }
    }
}
