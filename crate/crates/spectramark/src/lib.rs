//! Blind, robust grayscale image watermarking in the DCT of the DFT
//! magnitude, with Arnold-scrambled logos.
//!
//! A binary logo is spread over the host image's frequency plane: the DFT
//! magnitude is tiled into 8x8 blocks, each block is DCT-transformed, and
//! one of two keyed pseudo-noise carriers is added to the 22 mid-band
//! coefficients of one block per logo bit. Extraction is blind: the two
//! secret keys (carrier seed and Arnold iteration count) and the logo
//! dimensions are all the detector needs.
//!
//! The crate also ships the evaluation machinery around the codec: an
//! attack simulator (noise, filtering, histogram equalization, JPEG
//! quantization, cropping, rotation, chains), quality metrics (PSNR, SSIM,
//! NC, BER), a deterministic benchmark harness that renders CSV/Markdown
//! tables, and a synthetic corpus generator for self-contained runs.
//!
//! Start with the runnable examples, one per capability:
//!
//! ```text
//! cargo run --release --example embed_and_extract
//! cargo run --release --example attack_robustness
//! cargo run --release --example strength_sweep
//! cargo run --release --example arnold_scrambling
//! cargo run --release --example spectral_transforms
//! cargo run --release --example quality_metrics
//! cargo run --release --example benchmark_report
//! ```
//!
//! The same functionality is exposed as a thin CLI (`spectramark`) with
//! `embed`, `extract`, `attack`, `metrics`, `bench`, `sweep` and
//! `gen-corpus` subcommands.

pub mod arnold;
pub mod attacks;
pub mod bench;
pub mod cli;
pub mod codec;
pub mod error;
pub mod image;
pub mod metrics;
pub mod pn;
pub mod transforms;

pub use codec::{embed, extract, EmbedConfig, EmbedResult};
pub use error::{Error, Result};
pub use image::{GrayImage, WatermarkBits};
