//! Run the attack battery against one watermarked image and print the
//! normalized correlation the blind extractor still achieves.
//!
//! ```bash
//! cargo run --release --example attack_robustness
//! ```

use spectramark::attacks::parse_attack_token;
use spectramark::bench::generate_corpus;
use spectramark::codec::{embed, extract, EmbedConfig};
use spectramark::image::{GrayImage, WatermarkBits};
use spectramark::metrics::{nc, psnr};

fn main() -> spectramark::Result<()> {
    let dir = std::env::temp_dir().join("spectramark-attack-demo");
    generate_corpus(&dir, 9)?;
    let host = GrayImage::read_pgm(dir.join("clouds_a.pgm"))?;
    let logo = WatermarkBits::read_pbm(dir.join("logo_19x52.pbm"))?;
    let cfg = EmbedConfig::new(7, 24, logo.rows(), logo.cols());
    let marked = embed(&host, &logo, &cfg)?.watermarked;

    let battery = [
        "jpeg:qf=90",
        "jpeg:qf=70",
        "jpeg:qf=50",
        "gn:var=0.001,seed=7",
        "gn:var=0.01,seed=7",
        "spn:density=0.001,seed=7",
        "lpgf:sigma=0.5,window=3",
        "lpgf:sigma=0.5,window=9",
        "gs:sigma=0.6,window=9",
        "he",
        "crop:frac=0.1",
        "crop:frac=0.25",
        "crop:frac=0.5",
        "rot:angle=0.25",
        "rot:angle=1.0",
        "chain:[he|gn:var=0.001,seed=7]",
        "chain:[spn:density=0.001,seed=7|jpeg:qf=90]",
    ];

    println!("{:<44} {:>8} {:>12}", "attack", "nc", "psnr(dB)");
    for token in battery {
        let attack = parse_attack_token(token)?;
        let attacked = attack.apply(&marked);
        let recovered = extract(&attacked, &cfg)?;
        println!(
            "{:<44} {:>8.4} {:>12.2}",
            token,
            nc(&logo, &recovered)?,
            psnr(&marked, &attacked)?
        );
    }
    println!("\nlow-radius spectral bands survive compression and noise;");
    println!("rotation displaces frequency bins and is the scheme's hard limit.");
    Ok(())
}
