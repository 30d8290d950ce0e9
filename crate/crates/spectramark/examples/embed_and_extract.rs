//! End-to-end walk: generate the synthetic corpus, watermark an image,
//! push it through an 8-bit file, and blindly recover the logo.
//!
//! ```bash
//! cargo run --release --example embed_and_extract
//! ```

use spectramark::bench::generate_corpus;
use spectramark::codec::{embed, extract, EmbedConfig};
use spectramark::image::{GrayImage, WatermarkBits};
use spectramark::metrics::{ber, nc};

fn main() -> spectramark::Result<()> {
    let dir = std::env::temp_dir().join("spectramark-embed-demo");
    generate_corpus(&dir, 9)?;
    println!("corpus in {}", dir.display());

    let host = GrayImage::read_pgm(dir.join("clouds_a.pgm"))?;
    let logo = WatermarkBits::read_pbm(dir.join("logo_19x52.pbm"))?;

    // key1 seeds the carriers, key2 counts Arnold scrambling rounds.
    let cfg = EmbedConfig::new(0xC0FFEE, 24, logo.rows(), logo.cols());
    let result = embed(&host, &logo, &cfg)?;
    println!(
        "embedded {} bits at k={}: psnr={:.2} dB ssim={:.4}",
        logo.rows() * logo.cols(),
        cfg.strength,
        result.psnr,
        result.ssim
    );

    // The watermark must survive the trip through an ordinary 8-bit file.
    let marked_path = dir.join("watermarked.pgm");
    result.watermarked.write_pgm(&marked_path)?;
    let reloaded = GrayImage::read_pgm(&marked_path)?;

    // Blind extraction: only the keys and the logo dimensions are needed.
    let recovered = extract(&reloaded, &cfg)?;
    recovered.write_pbm(dir.join("recovered.pbm"))?;
    println!(
        "recovered logo: nc={:.4} ber={:.4}",
        nc(&logo, &recovered)?,
        ber(&logo, &recovered)?
    );

    // Wrong carrier keys get unrelated bit patterns back.
    for bad_key in [2u64, 3, 5] {
        let wrong = extract(&reloaded, &EmbedConfig::new(bad_key, 24, 19, 52))?;
        println!("wrong-key ({bad_key}) extraction: nc={:.4}", nc(&logo, &wrong)?);
    }
    Ok(())
}
