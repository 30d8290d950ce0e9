//! The transform kernels by themselves: DFT magnitude/phase, the
//! orthonormal 8x8 block DCT, and the mid-band coefficient mask the
//! codec writes into.
//!
//! ```bash
//! cargo run --release --example spectral_transforms
//! ```

use spectramark::bench::generate_corpus;
use spectramark::image::GrayImage;
use spectramark::transforms::{dct2_blocks, dft2, idct2_blocks, idft2, midband_mask};

fn main() -> spectramark::Result<()> {
    let dir = std::env::temp_dir().join("spectramark-transforms-demo");
    generate_corpus(&dir, 9)?;
    let img = GrayImage::read_pgm(dir.join("clouds_a.pgm"))?;

    // Forward DFT is normalized: the DC bin is the mean pixel value.
    let spec = dft2(&img);
    let mean: f64 = img.data().iter().sum::<f64>() / img.data().len() as f64;
    println!("dc magnitude = {:.4}, mean pixel = {:.4}", spec.magnitude[0], mean);

    let back = idft2(&spec);
    let worst = img
        .data()
        .iter()
        .zip(back.data())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    println!("dft -> idft roundtrip, worst |err| = {worst:.3e}");

    let grid = dct2_blocks(img.data(), img.height(), img.width())?;
    println!(
        "block dct: {}x{} tiles of 8x8 coefficients",
        grid.block_rows, grid.block_cols
    );
    let pixel_energy: f64 = img.data().iter().map(|v| v * v).sum();
    let coef_energy: f64 = grid.blocks.iter().flatten().map(|c| c * c).sum();
    println!(
        "energy preserved per block (orthonormal): pixels {pixel_energy:.3e} vs coefficients {coef_energy:.3e}"
    );
    let restored = idct2_blocks(&grid);
    let worst = img
        .data()
        .iter()
        .zip(&restored)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    println!("dct -> idct roundtrip, worst |err| = {worst:.3e}");

    // The 22 mid-band positions: between the DC corner and the highest
    // frequencies, where edits stay invisible yet survive compression.
    let mask = midband_mask();
    println!("\nmid-band mask ({} positions, '*' = written):", mask.len());
    for u in 0..8 {
        let line: String = (0..8)
            .map(|v| if mask.contains(&(u, v)) { " *" } else { " ." })
            .collect();
        println!(" {line}");
    }
    Ok(())
}
