//! Image quality and watermark robustness metrics: MSE/PSNR, SSIM,
//! normalized correlation and bit error rate.

use crate::error::{Error, Result};
use crate::image::{GrayImage, WatermarkBits};

/// Fidelity of one image against a reference.
#[derive(Debug, Clone, Copy)]
pub struct QualityReport {
    pub mse: f64,
    /// dB against MAX = 255; infinite when the images are identical.
    pub psnr: f64,
    pub ssim: f64,
}

/// Similarity of an extracted watermark to the original.
#[derive(Debug, Clone, Copy)]
pub struct RobustnessScore {
    pub nc: f64,
    pub ber: f64,
}

fn check_same_dims(a: &GrayImage, b: &GrayImage) -> Result<()> {
    if a.height() != b.height() || a.width() != b.width() {
        return Err(Error::Contract(format!(
            "image dimensions differ: {}x{} vs {}x{}",
            a.height(),
            a.width(),
            b.height(),
            b.width()
        )));
    }
    Ok(())
}

/// Mean squared error of pixel intensities.
pub fn mse(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    check_same_dims(a, b)?;
    let sum: f64 = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    Ok(sum / a.data().len() as f64)
}

/// Peak signal-to-noise ratio in dB with MAX = 255. Identical images give
/// the +infinity sentinel.
pub fn psnr(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    let mse = mse(a, b)?;
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (255.0 * 255.0 / mse).log10())
}

const SSIM_WINDOW: usize = 11;
const SSIM_SIGMA: f64 = 1.5;

/// Structural similarity: mean of the local SSIM map, computed with an
/// 11x11 Gaussian window (sigma 1.5), stabilizers c1 = (0.01*255)^2 and
/// c2 = (0.03*255)^2, and mirrored boundaries.
pub fn ssim(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    check_same_dims(a, b)?;
    if a.height() < SSIM_WINDOW || a.width() < SSIM_WINDOW {
        return Err(Error::Contract(format!(
            "ssim needs a minimum side of {SSIM_WINDOW}, got {}x{}",
            a.height(),
            a.width()
        )));
    }
    let c1 = (0.01 * 255.0f64).powi(2);
    let c2 = (0.03 * 255.0f64).powi(2);
    let (h, w) = (a.height(), a.width());

    let sq =
        |img: &GrayImage| -> Vec<f64> { img.data().iter().map(|v| v * v).collect() };
    let prod: Vec<f64> = a.data().iter().zip(b.data()).map(|(x, y)| x * y).collect();

    let mu_a = gaussian_filter(a.data(), h, w);
    let mu_b = gaussian_filter(b.data(), h, w);
    let raw_aa = gaussian_filter(&sq(a), h, w);
    let raw_bb = gaussian_filter(&sq(b), h, w);
    let raw_ab = gaussian_filter(&prod, h, w);

    let mut acc = 0.0;
    for i in 0..h * w {
        let (ma, mb) = (mu_a[i], mu_b[i]);
        let var_a = raw_aa[i] - ma * ma;
        let var_b = raw_bb[i] - mb * mb;
        let cov = raw_ab[i] - ma * mb;
        acc += ((2.0 * ma * mb + c1) * (2.0 * cov + c2))
            / ((ma * ma + mb * mb + c1) * (var_a + var_b + c2));
    }
    Ok(acc / (h * w) as f64)
}

/// Separable Gaussian blur with mirrored boundary handling.
fn gaussian_filter(data: &[f64], h: usize, w: usize) -> Vec<f64> {
    use std::sync::OnceLock;
    static KERNEL: OnceLock<[f64; SSIM_WINDOW]> = OnceLock::new();
    let kernel = KERNEL.get_or_init(|| {
        let mut k = [0.0; SSIM_WINDOW];
        let half = (SSIM_WINDOW / 2) as isize;
        let mut sum = 0.0;
        for (i, v) in k.iter_mut().enumerate() {
            let d = (i as isize - half) as f64;
            *v = (-d * d / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp();
            sum += *v;
        }
        for v in &mut k {
            *v /= sum;
        }
        k
    });
    let half = (SSIM_WINDOW / 2) as isize;
    let mirror = |i: isize, n: isize| -> usize {
        // reflect without repeating the edge sample's neighbor position
        let mut i = i;
        if i < 0 {
            i = -i - 1;
        }
        if i >= n {
            i = 2 * n - 1 - i;
        }
        i as usize
    };
    let mut tmp = vec![0.0; h * w];
    for r in 0..h {
        for c in 0..w {
            let mut acc = 0.0;
            for (k, kv) in kernel.iter().enumerate() {
                let cc = mirror(c as isize + k as isize - half, w as isize);
                acc += kv * data[r * w + cc];
            }
            tmp[r * w + c] = acc;
        }
    }
    let mut out = vec![0.0; h * w];
    for c in 0..w {
        for r in 0..h {
            let mut acc = 0.0;
            for (k, kv) in kernel.iter().enumerate() {
                let rr = mirror(r as isize + k as isize - half, h as isize);
                acc += kv * tmp[rr * w + c];
            }
            out[r * w + c] = acc;
        }
    }
    out
}

fn check_same_wm_dims(a: &WatermarkBits, b: &WatermarkBits) -> Result<()> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::Contract(format!(
            "watermark dimensions differ: {}x{} vs {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    Ok(())
}

/// Normalized correlation of two binary watermarks:
/// `sum(w*w') / (sqrt(sum w^2) * sqrt(sum w'^2))`, and 0 when either side
/// has no set bits.
pub fn nc(a: &WatermarkBits, b: &WatermarkBits) -> Result<f64> {
    check_same_wm_dims(a, b)?;
    let mut dot = 0u64;
    let mut na = 0u64;
    let mut nb = 0u64;
    for (&x, &y) in a.bits().iter().zip(b.bits()) {
        dot += (x & y) as u64;
        na += x as u64;
        nb += y as u64;
    }
    if na == 0 || nb == 0 {
        return Ok(0.0);
    }
    // sqrt of the product keeps nc(w, w) exactly 1 (sqrt(n^2) == n in IEEE).
    Ok(dot as f64 / ((na * nb) as f64).sqrt())
}

/// Fraction of differing bits.
pub fn ber(a: &WatermarkBits, b: &WatermarkBits) -> Result<f64> {
    check_same_wm_dims(a, b)?;
    let diff = a.bits().iter().zip(b.bits()).filter(|(x, y)| x != y).count();
    Ok(diff as f64 / a.bits().len() as f64)
}

/// All image-fidelity numbers in one shot.
pub fn quality(a: &GrayImage, b: &GrayImage) -> Result<QualityReport> {
    Ok(QualityReport {
        mse: mse(a, b)?,
        psnr: psnr(a, b)?,
        ssim: ssim(a, b)?,
    })
}

/// Both watermark-similarity numbers in one shot.
pub fn robustness(original: &WatermarkBits, extracted: &WatermarkBits) -> Result<RobustnessScore> {
    Ok(RobustnessScore {
        nc: nc(original, extracted)?,
        ber: ber(original, extracted)?,
    })
}
