//! Sweep the embedding strength and watch the fidelity/robustness
//! tradeoff: higher k costs PSNR and buys survival under compression.
//!
//! ```bash
//! cargo run --release --example strength_sweep
//! ```

use spectramark::attacks::parse_attack_token;
use spectramark::bench::generate_corpus;
use spectramark::codec::{embed, extract, EmbedConfig};
use spectramark::image::{GrayImage, WatermarkBits};
use spectramark::metrics::nc;

fn main() -> spectramark::Result<()> {
    let dir = std::env::temp_dir().join("spectramark-sweep-demo");
    generate_corpus(&dir, 9)?;
    let host = GrayImage::read_pgm(dir.join("clouds_a.pgm"))?;
    let logo = WatermarkBits::read_pbm(dir.join("logo_19x52.pbm"))?;
    let jpeg70 = parse_attack_token("jpeg:qf=70")?;
    let jpeg40 = parse_attack_token("jpeg:qf=40")?;

    println!(
        "{:>8} {:>12} {:>10} {:>14} {:>14}",
        "k", "psnr(dB)", "ssim", "nc@jpeg70", "nc@jpeg40"
    );
    for k in [1200.0, 2400.0, 4800.0, 9600.0, 19200.0] {
        let cfg = EmbedConfig::new(7, 24, logo.rows(), logo.cols()).with_strength(k);
        let out = embed(&host, &logo, &cfg)?;
        let nc70 = nc(&logo, &extract(&jpeg70.apply(&out.watermarked), &cfg)?)?;
        let nc40 = nc(&logo, &extract(&jpeg40.apply(&out.watermarked), &cfg)?)?;
        println!(
            "{:>8} {:>12.2} {:>10.4} {:>14.4} {:>14.4}",
            k, out.psnr, out.ssim, nc70, nc40
        );
    }
    Ok(())
}
