//! Arnold cat-map scrambling: watch a logo dissolve into noise and come
//! back, and print the map's period for common sides.
//!
//! ```bash
//! cargo run --release --example arnold_scrambling
//! ```

use spectramark::arnold::{
    arnold_descramble, arnold_period, arnold_scramble, pack_square, unpack_square, ArnoldKey,
};
use spectramark::image::WatermarkBits;

fn render(bits: &[u8], side: usize, rows: usize) {
    for r in 0..rows.min(side) {
        let line: String = (0..side)
            .map(|c| if bits[r * side + c] == 1 { '#' } else { '.' })
            .collect();
        println!("  {line}");
    }
}

fn main() -> spectramark::Result<()> {
    // A 12x20 logo packs into the smallest square that holds it (16x16).
    let bits: Vec<u8> = (0..12 * 20)
        .map(|i| {
            let (y, x) = (i / 20, i % 20);
            u8::from((y >= 3 && y < 9 && x >= 4 && x < 16) || y == x)
        })
        .collect();
    let logo = WatermarkBits::new(12, 20, bits)?;
    let packed = pack_square(&logo);
    println!("original ({}x{} packed to {0}x{0}):", packed.side(), packed.side());
    render(packed.bits(), packed.side(), packed.side());

    let key = ArnoldKey { iterations: 5 };
    let scrambled = arnold_scramble(&packed, key);
    println!("\nafter 5 cat-map rounds:");
    render(scrambled.bits(), scrambled.side(), scrambled.side());

    let recovered = unpack_square(&arnold_descramble(&scrambled, key), 12, 20)?;
    println!("\nround trip exact: {}", recovered == logo);

    println!("\nperiods (iterations until the map is the identity):");
    println!("  {:>5} {:>8} {:>10}", "side", "period", "side^2/2");
    for side in [2usize, 4, 8, 16, 32, 64] {
        println!(
            "  {:>5} {:>8} {:>10}",
            side,
            arnold_period(side),
            side * side / 2
        );
    }
    println!("\niteration counts congruent modulo the period alias to the same key.");
    Ok(())
}
