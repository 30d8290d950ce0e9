//! Property tests for the structural invariants: permutation identities,
//! file-format roundtrips, transform roundtrips, metric bounds, attack
//! output contracts and codec roundtrips on benign hosts.

use proptest::prelude::*;

use spectramark::arnold::{arnold_descramble, arnold_scramble, ArnoldKey, SquareBitMatrix};
use spectramark::attacks;
use spectramark::codec::{self, EmbedConfig};
use spectramark::image::{round_clip_u8, GrayImage, WatermarkBits};
use spectramark::metrics;
use spectramark::pn::XorShift64Star;
use spectramark::transforms;

fn bit_square(side: usize, seed: u64) -> SquareBitMatrix {
    let mut rng = XorShift64Star::new(seed);
    let bits = (0..side * side).map(|_| (rng.next_u64() & 1) as u8).collect();
    SquareBitMatrix::new(side, bits).unwrap()
}

fn noise_image(h: usize, w: usize, seed: u64, base: f64, amp: f64) -> GrayImage {
    let mut rng = XorShift64Star::new(seed);
    let data = (0..h * w)
        .map(|_| round_clip_u8(base + amp * (rng.next_unit() * 2.0 - 1.0)) as f64)
        .collect();
    GrayImage::new(h, w, data).unwrap()
}

proptest! {
    #[test]
    fn arnold_descramble_inverts_scramble(
        side in 1usize..=64,
        iterations in 0u64..=100,
        seed in any::<u64>(),
    ) {
        let m = bit_square(side, seed);
        let key = ArnoldKey { iterations };
        prop_assert_eq!(arnold_descramble(&arnold_scramble(&m, key), key), m);
    }

    #[test]
    fn arnold_preserves_population(
        side in 1usize..=48,
        iterations in 0u64..=60,
        seed in any::<u64>(),
    ) {
        let m = bit_square(side, seed);
        let ones: u32 = m.bits().iter().map(|&b| b as u32).sum();
        let s = arnold_scramble(&m, ArnoldKey { iterations });
        prop_assert_eq!(s.bits().iter().map(|&b| b as u32).sum::<u32>(), ones);
    }

    #[test]
    fn pgm_file_roundtrip_is_round_clip(
        dim_sel in 0usize..3,
        seed in any::<u64>(),
        base in -50.0f64..300.0,
        amp in 0.0f64..80.0,
    ) {
        let dims = [8, 16, 24][dim_sel];
        let mut rng = XorShift64Star::new(seed);
        let data: Vec<f64> = (0..dims * dims)
            .map(|_| base + amp * (rng.next_unit() * 2.0 - 1.0))
            .collect();
        let img = GrayImage::new(dims, dims, data).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.pgm");
        img.write_pgm(&path).unwrap();
        let back = GrayImage::read_pgm(&path).unwrap();
        let quantized = img.quantize();
        prop_assert_eq!(back.data(), quantized.data());
        // Determinism: a second write is byte-identical.
        let first = std::fs::read(&path).unwrap();
        img.write_pgm(&path).unwrap();
        prop_assert_eq!(std::fs::read(&path).unwrap(), first);
    }

    #[test]
    fn pbm_file_roundtrip(rows in 1usize..40, cols in 1usize..60, seed in any::<u64>()) {
        let mut rng = XorShift64Star::new(seed);
        let bits: Vec<u8> = (0..rows * cols).map(|_| (rng.next_u64() & 1) as u8).collect();
        let wm = WatermarkBits::new(rows, cols, bits).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("w.pbm");
        wm.write_pbm(&path).unwrap();
        prop_assert_eq!(WatermarkBits::read_pbm(&path).unwrap(), wm);
    }

    #[test]
    fn dft_roundtrip_identity(
        hs in 1usize..=3,
        ws in 1usize..=3,
        seed in any::<u64>(),
    ) {
        let (h, w) = (hs * 8, ws * 8);
        let img = noise_image(h, w, seed, 128.0, 120.0);
        let back = transforms::idft2(&transforms::dft2(&img));
        for (a, b) in img.data().iter().zip(back.data()) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn block_dct_roundtrip_and_parseval(
        hs in 1usize..=3,
        ws in 1usize..=3,
        seed in any::<u64>(),
    ) {
        let (h, w) = (hs * 8, ws * 8);
        let img = noise_image(h, w, seed, 100.0, 90.0);
        let grid = transforms::dct2_blocks(img.data(), h, w).unwrap();
        let pixel_energy: f64 = img.data().iter().map(|v| v * v).sum();
        let coef_energy: f64 = grid.blocks.iter().flatten().map(|c| c * c).sum();
        prop_assert!((pixel_energy - coef_energy).abs() < 1e-6 * pixel_energy.max(1.0));
        let back = transforms::idct2_blocks(&grid);
        for (a, b) in img.data().iter().zip(&back) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn nc_bounds_and_equality(
        rows in 1usize..20,
        cols in 1usize..20,
        seed in any::<u64>(),
    ) {
        let mut rng = XorShift64Star::new(seed);
        let a: Vec<u8> = (0..rows * cols).map(|_| (rng.next_u64() & 1) as u8).collect();
        let b: Vec<u8> = (0..rows * cols).map(|_| (rng.next_u64() & 1) as u8).collect();
        let wa = WatermarkBits::new(rows, cols, a.clone()).unwrap();
        let wb = WatermarkBits::new(rows, cols, b.clone()).unwrap();
        let v = metrics::nc(&wa, &wb).unwrap();
        prop_assert!((0.0..=1.0).contains(&v));
        prop_assert_eq!(metrics::nc(&wa, &wb).unwrap(), metrics::nc(&wb, &wa).unwrap());
        // nc == 1 exactly when the matrices are equal (and non-zero).
        if a.iter().any(|&x| x == 1) && b.iter().any(|&x| x == 1) {
            prop_assert_eq!(v == 1.0, a == b);
        }
    }

    #[test]
    fn attacks_preserve_contract(kind in 0usize..7, seed in any::<u64>(), img_seed in any::<u64>()) {
        let img = noise_image(64, 64, img_seed, 120.0, 80.0);
        let attack = match kind {
            0 => attacks::Attack::GaussianNoise { variance: 0.005, seed },
            1 => attacks::Attack::SaltPepper { density: 0.01, seed },
            2 => attacks::Attack::GaussianLowpass { sigma: 0.5, window: 5 },
            3 => attacks::Attack::HistogramEq,
            4 => attacks::Attack::Jpeg { quality: 60 },
            5 => attacks::Attack::Crop { fraction: 0.25, anchor: attacks::CropAnchor::TopLeft },
            _ => attacks::Attack::Rotate { degrees: 1.5 },
        };
        let out = attack.apply(&img);
        prop_assert_eq!((out.height(), out.width()), (64, 64));
        prop_assert!(out.data().iter().all(|&v| (0.0..=255.0).contains(&v) && v.fract() == 0.0));
        // Stochastic attacks must reproduce bit-for-bit from the seed.
        let again = attack.apply(&img);
        prop_assert_eq!(again.data(), out.data());
    }

}

proptest! {
    // Full-size embeds are costly; a dozen random cases keep the runtime
    // reasonable while still sampling keys and content.
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Blind roundtrip at production geometry (512x512 host, 19x52 logo):
    /// any keys, quiet-spectrum host content. Hosts with strong energy
    /// inside the carrier band, or payloads large enough to spill into the
    /// near-DC blocks, are the codec's documented limits; those cases are
    /// exercised (and reported) by the acceptance suite instead.
    #[test]
    fn codec_roundtrip_at_production_geometry(
        key1 in any::<u64>(),
        key2 in 0u64..=100,
        img_seed in any::<u64>(),
        base in 90.0f64..170.0,
        amp in 4.0f64..8.0,
    ) {
        let host = noise_image(512, 512, img_seed, base, amp);
        let bits: Vec<u8> = (0..19 * 52).map(|i| ((i * 7 + 1) % 4 == 0) as u8).collect();
        let logo = WatermarkBits::new(19, 52, bits).unwrap();
        let cfg = EmbedConfig::new(key1, key2, 19, 52);
        let out = codec::embed(&host, &logo, &cfg).unwrap();
        let got = codec::extract(&out.watermarked.quantize(), &cfg).unwrap();
        prop_assert_eq!(metrics::nc(&logo, &got).unwrap(), 1.0);
    }
}

/// Wrong-carrier-key extraction is unreliable rather than uniformly bad: a
/// wrong key whose two carriers happen to align with the true pair decodes
/// well by construction (the per-block decision depends only on the four
/// cross-correlations). Almost all wrong keys land below 0.8.
#[test]
fn wrong_carrier_key_mostly_scrambles() {
    let host = noise_image(128, 128, 42, 128.0, 35.0);
    let bits: Vec<u8> = (0..60).map(|i| (i % 3 == 0) as u8).collect();
    let logo = WatermarkBits::new(6, 10, bits).unwrap();
    let cfg = EmbedConfig::new(7, 24, 6, 10);
    let marked = codec::embed(&host, &logo, &cfg).unwrap().watermarked;
    let mut below = 0;
    for wrong in 1000u64..1020 {
        let wrong_cfg = EmbedConfig::new(wrong, 24, 6, 10);
        let got = codec::extract(&marked, &wrong_cfg).unwrap();
        if metrics::nc(&logo, &got).unwrap() < 0.8 {
            below += 1;
        }
    }
    assert!(below >= 15, "only {below} of 20 wrong keys fell below 0.8");
}

/// Wrong Arnold key: the permutation misaligns the bits. Iteration counts
/// congruent modulo the packed side's period alias to the true key and are
/// excluded (that aliasing is inherent to a periodic map).
#[test]
fn wrong_arnold_key_scrambles() {
    let host = noise_image(128, 128, 43, 128.0, 35.0);
    let bits: Vec<u8> = (0..60).map(|i| (i % 5 < 2) as u8).collect();
    let logo = WatermarkBits::new(6, 10, bits).unwrap();
    let cfg = EmbedConfig::new(9, 24, 6, 10);
    let marked = codec::embed(&host, &logo, &cfg).unwrap().watermarked;
    // packed side is 8, period(8) = 6; 24 = 0 mod 6, so avoid multiples of 6
    for wrong in [1u64, 7, 11, 25] {
        let wrong_cfg = EmbedConfig::new(9, wrong, 6, 10);
        let got = codec::extract(&marked, &wrong_cfg).unwrap();
        let v = metrics::nc(&logo, &got).unwrap();
        assert!(v < 0.8, "arnold key {wrong}: nc {v}");
    }
}

/// Unwatermarked noise decodes to chance-level bits.
#[test]
fn unwatermarked_images_score_at_chance() {
    let bits: Vec<u8> = (0..60).map(|i| (i % 3 == 0) as u8).collect();
    let logo = WatermarkBits::new(6, 10, bits).unwrap();
    let cfg = EmbedConfig::new(7, 24, 6, 10);
    for seed in 0u64..20 {
        let img = noise_image(128, 128, 500 + seed, 128.0, 40.0);
        let got = codec::extract(&img, &cfg).unwrap();
        let v = metrics::nc(&logo, &got).unwrap();
        assert!(v < 0.8, "seed {seed}: nc {v} above chance band");
    }
}
