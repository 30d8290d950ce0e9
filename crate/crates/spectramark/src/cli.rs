//! Command-line surface: embed, extract, attack, metrics, bench, sweep and
//! gen-corpus subcommands over the library. All randomness flows from
//! explicit key/seed flags, so identical invocations produce byte-identical
//! artifacts. Standard output is limited to machine-parseable `key=value`
//! lines.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::attacks::parse_attack_token;
use crate::bench::{self, BenchConfig};
use crate::codec::{self, EmbedConfig};
use crate::image::{GrayImage, WatermarkBits};
use crate::metrics;

/// Accept a 64-bit key as decimal or 0x-prefixed hex.
pub fn parse_key(s: &str) -> Result<u64, String> {
    let s = s.trim();
    let parsed = if let Some(hex) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        u64::from_str_radix(hex, 16)
    } else {
        s.parse()
    };
    parsed.map_err(|_| format!("'{s}' is not a 64-bit integer (decimal or 0x-hex)"))
}

#[derive(Parser)]
#[command(
    name = "spectramark",
    about = "Blind robust image watermarking in the DCT of the DFT magnitude",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Embed a logo into a grayscale PGM image.
    Embed(EmbedArgs),
    /// Blindly extract a logo from a watermarked image.
    Extract(ExtractArgs),
    /// Apply an attack spec token to an image.
    Attack(AttackArgs),
    /// Compare two images (PSNR/SSIM) or two logos (NC/BER with --bits).
    Metrics(MetricsArgs),
    /// Run a benchmark config: embed, attack grid, extract, report tables.
    Bench(BenchArgs),
    /// Strength sweep over the first config image.
    Sweep(SweepArgs),
    /// Write the synthetic test corpus (5 images + 2 logos).
    GenCorpus(GenCorpusArgs),
}

#[derive(Args)]
struct EmbedArgs {
    /// Host image (binary PGM, dimensions divisible by 8).
    #[arg(long = "in")]
    input: PathBuf,
    /// Logo to embed (PBM).
    #[arg(long)]
    wm: PathBuf,
    /// Output watermarked PGM.
    #[arg(long)]
    out: PathBuf,
    /// Carrier seed (decimal or 0x-hex).
    #[arg(long, value_parser = parse_key)]
    key1: u64,
    /// Arnold iteration count.
    #[arg(long, value_parser = parse_key, default_value_t = codec::DEFAULT_ARNOLD_ITERATIONS)]
    key2: u64,
    /// Embedding strength.
    #[arg(long, default_value_t = codec::DEFAULT_STRENGTH)]
    k: f64,
}

#[derive(Args)]
struct ExtractArgs {
    /// Watermarked image (binary PGM).
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_parser = parse_key)]
    key1: u64,
    #[arg(long, value_parser = parse_key, default_value_t = codec::DEFAULT_ARNOLD_ITERATIONS)]
    key2: u64,
    /// Logo height in bits.
    #[arg(long)]
    rows: usize,
    /// Logo width in bits.
    #[arg(long)]
    cols: usize,
    /// Output logo PBM.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct AttackArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Attack token, e.g. `jpeg:qf=90` or `chain:[he|gn:var=0.001,seed=7]`.
    #[arg(long)]
    spec: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct MetricsArgs {
    /// First file (PGM, or PBM with --bits).
    #[arg(long)]
    a: PathBuf,
    /// Second file (PGM, or PBM with --bits).
    #[arg(long)]
    b: PathBuf,
    /// Compare binary logos (NC/BER) instead of images (PSNR/SSIM).
    #[arg(long)]
    bits: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    config: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    /// Comma-separated strength values, e.g. 2400,4800,9600,19200.
    #[arg(long = "k-list")]
    k_list: String,
}

#[derive(Args)]
struct GenCorpusArgs {
    #[arg(long = "out-dir")]
    out_dir: PathBuf,
    #[arg(long, value_parser = parse_key)]
    seed: u64,
}

/// Parse argv and run. Returns the process exit code; 0 only when the
/// requested artifact was fully written.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own help/usage; keep its exit semantics.
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn dispatch(cli: Cli) -> crate::error::Result<()> {
    match cli.command {
        Command::Embed(args) => {
            let host = GrayImage::read_pgm(&args.input)?;
            let wm = WatermarkBits::read_pbm(&args.wm)?;
            let cfg = EmbedConfig::new(args.key1, args.key2, wm.rows(), wm.cols())
                .with_strength(args.k);
            let result = codec::embed(&host, &wm, &cfg)?;
            result.watermarked.write_pgm(&args.out)?;
            println!("psnr={} ssim={}", fmt(result.psnr), fmt(result.ssim));
            Ok(())
        }
        Command::Extract(args) => {
            let img = GrayImage::read_pgm(&args.input)?;
            let cfg = EmbedConfig::new(args.key1, args.key2, args.rows, args.cols);
            let wm = codec::extract(&img, &cfg)?;
            wm.write_pbm(&args.out)
        }
        Command::Attack(args) => {
            let attack = parse_attack_token(&args.spec)?;
            let img = GrayImage::read_pgm(&args.input)?;
            attack.apply(&img).write_pgm(&args.out)
        }
        Command::Metrics(args) => {
            if args.bits {
                let a = WatermarkBits::read_pbm(&args.a)?;
                let b = WatermarkBits::read_pbm(&args.b)?;
                let score = metrics::robustness(&a, &b)?;
                println!("nc={} ber={}", fmt(score.nc), fmt(score.ber));
            } else {
                let a = GrayImage::read_pgm(&args.a)?;
                let b = GrayImage::read_pgm(&args.b)?;
                let report = metrics::quality(&a, &b)?;
                println!("psnr={} ssim={}", fmt(report.psnr), fmt(report.ssim));
            }
            Ok(())
        }
        Command::Bench(args) => {
            let cfg = BenchConfig::from_file(&args.config)?;
            let report = bench::run_bench(&cfg)?;
            bench::emit_tables(&report, &cfg.output_dir)?;
            println!("csv={}", cfg.output_dir.join("report.csv").display());
            println!("md={}", cfg.output_dir.join("report.md").display());
            Ok(())
        }
        Command::Sweep(args) => {
            let cfg = BenchConfig::from_file(&args.config)?;
            let mut k_values = Vec::new();
            for piece in args.k_list.split(',') {
                let k: f64 = piece.trim().parse().map_err(|_| {
                    crate::error::Error::Contract(format!("bad k value '{}'", piece.trim()))
                })?;
                k_values.push(k);
            }
            let report = bench::sweep_strength(&cfg, &k_values)?;
            bench::emit_tables(&report, &cfg.output_dir)?;
            println!("csv={}", cfg.output_dir.join("report.csv").display());
            println!("md={}", cfg.output_dir.join("report.md").display());
            Ok(())
        }
        Command::GenCorpus(args) => {
            for path in bench::generate_corpus(&args.out_dir, args.seed)? {
                println!("wrote={}", path.display());
            }
            Ok(())
        }
    }
}

fn fmt(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.4}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_parsing() {
        assert_eq!(parse_key("42").unwrap(), 42);
        assert_eq!(parse_key("0x2A").unwrap(), 42);
        assert_eq!(parse_key("0X2a").unwrap(), 42);
        assert!(parse_key("nope").is_err());
        assert!(parse_key("-1").is_err());
    }
}
