//! The metric toolbox: PSNR/SSIM between images, NC/BER between logos.
//!
//! ```bash
//! cargo run --release --example quality_metrics
//! ```

use spectramark::attacks::parse_attack_token;
use spectramark::bench::generate_corpus;
use spectramark::image::{GrayImage, WatermarkBits};
use spectramark::metrics::{ber, nc, psnr, ssim};

fn main() -> spectramark::Result<()> {
    let dir = std::env::temp_dir().join("spectramark-metrics-demo");
    generate_corpus(&dir, 9)?;
    let img = GrayImage::read_pgm(dir.join("clouds_a.pgm"))?;

    println!("image fidelity under increasing degradation:");
    println!("{:<24} {:>10} {:>8}", "degradation", "psnr(dB)", "ssim");
    println!("{:<24} {:>10} {:>8.4}", "none", "inf", ssim(&img, &img)?);
    for token in ["jpeg:qf=90", "jpeg:qf=50", "jpeg:qf=10", "gn:var=0.01,seed=1"] {
        let attacked = parse_attack_token(token)?.apply(&img);
        println!(
            "{:<24} {:>10.2} {:>8.4}",
            token,
            psnr(&img, &attacked)?,
            ssim(&img, &attacked)?
        );
    }

    let logo = WatermarkBits::read_pbm(dir.join("logo_19x52.pbm"))?;
    let flipped: Vec<u8> = logo
        .bits()
        .iter()
        .enumerate()
        .map(|(i, &b)| if i % 50 == 0 { 1 - b } else { b })
        .collect();
    let noisy = WatermarkBits::new(logo.rows(), logo.cols(), flipped)?;
    let complement =
        WatermarkBits::new(logo.rows(), logo.cols(), logo.bits().iter().map(|b| 1 - b).collect())?;

    println!("\nlogo similarity:");
    println!("{:<24} {:>8} {:>8}", "pair", "nc", "ber");
    println!("{:<24} {:>8.4} {:>8.4}", "identical", nc(&logo, &logo)?, ber(&logo, &logo)?);
    println!("{:<24} {:>8.4} {:>8.4}", "2% bits flipped", nc(&logo, &noisy)?, ber(&logo, &noisy)?);
    println!(
        "{:<24} {:>8.4} {:>8.4}",
        "complement",
        nc(&logo, &complement)?,
        ber(&logo, &complement)?
    );
    Ok(())
}
