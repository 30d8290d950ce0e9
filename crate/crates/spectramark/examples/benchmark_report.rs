//! Full benchmark run: the synthetic corpus against a ten-attack grid,
//! rendered as report.csv and report.md. The report content is a pure
//! function of the config (timing column aside), whatever the parallelism.
//!
//! ```bash
//! cargo run --release --example benchmark_report
//! ```

use spectramark::bench::{emit_tables, generate_corpus, run_bench, BenchConfig, CORPUS_IMAGES};

fn main() -> spectramark::Result<()> {
    let dir = std::env::temp_dir().join("spectramark-bench-demo");
    generate_corpus(&dir, 9)?;

    let cfg = BenchConfig {
        image_paths: CORPUS_IMAGES.iter().map(|n| dir.join(n)).collect(),
        watermark_path: dir.join("logo_19x52.pbm"),
        key1: 7,
        key2: 24,
        strength: 9600.0,
        attack_tokens: [
            "jpeg:qf=90",
            "jpeg:qf=50",
            "gn:var=0.001,seed=7",
            "spn:density=0.001,seed=7",
            "lpgf:sigma=0.5,window=9",
            "he",
            "crop:frac=0.25",
            "crop:frac=0.5",
            "rot:angle=0.25",
            "chain:[he|gn:var=0.001,seed=7]",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect(),
        output_dir: dir.join("report"),
        parallelism: 4,
    };

    let report = run_bench(&cfg)?;
    emit_tables(&report, &cfg.output_dir)?;
    println!("wrote {}", cfg.output_dir.join("report.csv").display());
    println!("wrote {}", cfg.output_dir.join("report.md").display());

    println!("\n{:<14} {:<36} {:>8} {:>10}", "image", "attack", "nc", "wall(ms)");
    for row in &report.rows {
        println!(
            "{:<14} {:<36} {:>8.4} {:>10.1}",
            row.image_id, row.attack_token, row.nc, row.wall_time_ms
        );
    }
    Ok(())
}
