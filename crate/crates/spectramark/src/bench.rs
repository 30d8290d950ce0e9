//! Benchmark harness: embed each corpus image once, run an attack grid
//! against the watermarked copy, extract, score, and emit CSV/Markdown
//! tables. Also hosts the strength sweep and the synthetic corpus
//! generator used for self-contained runs.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use crate::attacks::{parse_attack_token, Attack};
use crate::codec::{self, EmbedConfig};
use crate::error::{Error, Result};
use crate::image::{round_clip_u8, GrayImage, WatermarkBits};
use crate::metrics;
use crate::pn::XorShift64Star;

/// A full benchmark run description, usually parsed from a config file.
#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub image_paths: Vec<PathBuf>,
    pub watermark_path: PathBuf,
    pub key1: u64,
    pub key2: u64,
    pub strength: f64,
    /// Attack tokens, applied to every image. The unattacked baseline row
    /// is always produced and does not need to be listed.
    pub attack_tokens: Vec<String>,
    pub output_dir: PathBuf,
    pub parallelism: usize,
}

impl BenchConfig {
    /// Parse the line-oriented `key = value` config format. Repeated
    /// `image` and `attack` keys accumulate; `#` starts a comment.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut image_paths = Vec::new();
        let mut watermark_path = None;
        let mut key1 = 1u64;
        let mut key2 = codec::DEFAULT_ARNOLD_ITERATIONS;
        let mut strength = codec::DEFAULT_STRENGTH;
        let mut attack_tokens = Vec::new();
        let mut output_dir = PathBuf::from(".");
        let mut parallelism = 1usize;

        for (num, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |reason: &str| Error::Config {
                path: path.to_path_buf(),
                line: num + 1,
                reason: reason.to_string(),
            };
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| bad("expected key = value"))?;
            match key {
                "image" => image_paths.push(PathBuf::from(value)),
                "watermark" => watermark_path = Some(PathBuf::from(value)),
                "key1" => key1 = crate::cli::parse_key(value).map_err(|e| bad(&e))?,
                "key2" => key2 = crate::cli::parse_key(value).map_err(|e| bad(&e))?,
                "strength" => {
                    strength = value.parse().map_err(|_| bad("strength is not a number"))?
                }
                "attack" => {
                    parse_attack_token(value).map_err(|e| bad(&e.to_string()))?;
                    attack_tokens.push(value.to_string());
                }
                "output_dir" => output_dir = PathBuf::from(value),
                "parallelism" => {
                    parallelism = value.parse().map_err(|_| bad("parallelism is not a count"))?;
                    if parallelism == 0 {
                        return Err(bad("parallelism must be at least 1"));
                    }
                }
                other => return Err(bad(&format!("unknown key '{other}'"))),
            }
        }
        if image_paths.is_empty() {
            return Err(Error::Config {
                path: path.to_path_buf(),
                line: 0,
                reason: "config lists no images".into(),
            });
        }
        let watermark_path = watermark_path.ok_or_else(|| Error::Config {
            path: path.to_path_buf(),
            line: 0,
            reason: "config lists no watermark".into(),
        })?;
        Ok(BenchConfig {
            image_paths,
            watermark_path,
            key1,
            key2,
            strength,
            attack_tokens,
            output_dir,
            parallelism,
        })
    }
}

/// One scored (image, attack) pair.
#[derive(Debug, Clone)]
pub struct EvalRow {
    pub image_id: String,
    pub attack_token: String,
    pub nc: f64,
    pub ber: f64,
    /// Fidelity of the attacked image against the watermarked one.
    pub psnr_after_attack: f64,
    pub ssim_after_attack: f64,
    pub embed_psnr: f64,
    pub embed_ssim: f64,
    /// Time spent in the embed/extract bodies: embed + extract for the
    /// `none` row, extraction alone for attack rows. File I/O and attack
    /// application are excluded, as is this column from determinism
    /// comparisons.
    pub wall_time_ms: f64,
}

/// Report rows ordered by (image, attack-grid position).
#[derive(Debug, Clone, Default)]
pub struct EvalReport {
    pub rows: Vec<EvalRow>,
}

struct PreparedImage {
    image_id: String,
    watermarked: GrayImage,
    embed_psnr: f64,
    embed_ssim: f64,
    embed_ms: f64,
}

/// Run the full protocol: embed once per image, then attack/extract/score
/// every grid entry. Rows are deterministic under fixed seeds regardless
/// of `parallelism`; only the timing column varies run to run.
pub fn run_bench(cfg: &BenchConfig) -> Result<EvalReport> {
    let wm = WatermarkBits::read_pbm(&cfg.watermark_path)?;
    let embed_cfg = EmbedConfig::new(cfg.key1, cfg.key2, wm.rows(), wm.cols())
        .with_strength(cfg.strength);

    let attacks: Vec<Attack> = cfg
        .attack_tokens
        .iter()
        .map(|t| parse_attack_token(t))
        .collect::<Result<_>>()?;

    // Phase 1: load + embed, in parallel across images. Unreadable or
    // unembeddable images become error rows; capacity errors are fatal.
    let prepared: Vec<std::result::Result<PreparedImage, EvalRow>> =
        parallel_map(cfg.parallelism, cfg.image_paths.len(), |idx| {
            let path = &cfg.image_paths[idx];
            let image_id = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| format!("image{idx}"));
            let host = match GrayImage::read_pgm(path) {
                Ok(img) => img,
                Err(e) => return Ok(Err(error_row(&image_id, &e))),
            };
            let started = Instant::now();
            let embedded = match codec::embed(&host, &wm, &embed_cfg) {
                Ok(r) => r,
                Err(e @ Error::Capacity { .. }) => return Err(e),
                Err(e) => return Ok(Err(error_row(&image_id, &e))),
            };
            Ok(Ok(PreparedImage {
                image_id,
                watermarked: embedded.watermarked,
                embed_psnr: embedded.psnr,
                embed_ssim: embedded.ssim,
                embed_ms: started.elapsed().as_secs_f64() * 1e3,
            }))
        })?;

    // Phase 2: (image, attack) pairs, in parallel. Slot indices fix the
    // output order up front so scheduling cannot reorder rows.
    let per_image = 1 + attacks.len();
    let mut rows: Vec<Option<EvalRow>> = vec![None; prepared.len() * per_image];
    let mut tasks = Vec::new();
    for (img_idx, p) in prepared.iter().enumerate() {
        match p {
            Err(row) => rows[img_idx * per_image] = Some(row.clone()),
            Ok(_) => {
                for a in 0..per_image {
                    tasks.push((img_idx, a));
                }
            }
        }
    }
    let computed: Vec<(usize, EvalRow)> = parallel_map(cfg.parallelism, tasks.len(), |t| {
        let (img_idx, a) = tasks[t];
        let p = match &prepared[img_idx] {
            Ok(p) => p,
            Err(_) => unreachable!("error images enqueue no tasks"),
        };
        let slot = img_idx * per_image + a;
        let row = if a == 0 {
            let started = Instant::now();
            let got = codec::extract(&p.watermarked, &embed_cfg)?;
            let extract_ms = started.elapsed().as_secs_f64() * 1e3;
            EvalRow {
                image_id: p.image_id.clone(),
                attack_token: "none".into(),
                nc: metrics::nc(&wm, &got)?,
                ber: metrics::ber(&wm, &got)?,
                psnr_after_attack: f64::INFINITY,
                ssim_after_attack: 1.0,
                embed_psnr: p.embed_psnr,
                embed_ssim: p.embed_ssim,
                wall_time_ms: p.embed_ms + extract_ms,
            }
        } else {
            let attacked = attacks[a - 1].apply(&p.watermarked);
            let started = Instant::now();
            let got = codec::extract(&attacked, &embed_cfg)?;
            let wall = started.elapsed().as_secs_f64() * 1e3;
            EvalRow {
                image_id: p.image_id.clone(),
                attack_token: cfg.attack_tokens[a - 1].clone(),
                nc: metrics::nc(&wm, &got)?,
                ber: metrics::ber(&wm, &got)?,
                psnr_after_attack: metrics::psnr(&p.watermarked, &attacked)?,
                ssim_after_attack: metrics::ssim(&p.watermarked, &attacked)?,
                embed_psnr: p.embed_psnr,
                embed_ssim: p.embed_ssim,
                wall_time_ms: wall,
            }
        };
        Ok((slot, row))
    })?;
    for (slot, row) in computed {
        rows[slot] = Some(row);
    }
    Ok(EvalReport {
        rows: rows.into_iter().flatten().collect(),
    })
}

fn error_row(image_id: &str, err: &Error) -> EvalRow {
    EvalRow {
        image_id: image_id.to_string(),
        attack_token: format!("error: {err}"),
        nc: 0.0,
        ber: 0.0,
        psnr_after_attack: 0.0,
        ssim_after_attack: 0.0,
        embed_psnr: 0.0,
        embed_ssim: 0.0,
        wall_time_ms: 0.0,
    }
}

/// Strength sweep over the first config image: the cross product of
/// `k_values` and the attack grid, rows keyed by appending `#k=<v>` to the
/// image id.
pub fn sweep_strength(cfg: &BenchConfig, k_values: &[f64]) -> Result<EvalReport> {
    if k_values.is_empty() || k_values.iter().any(|&k| k <= 0.0) {
        return Err(Error::Contract("k values must be positive and non-empty".into()));
    }
    let first = cfg
        .image_paths
        .first()
        .ok_or_else(|| Error::Contract("sweep needs at least one image".into()))?;
    let mut rows = Vec::new();
    for &k in k_values {
        let sub = BenchConfig {
            image_paths: vec![first.clone()],
            strength: k,
            parallelism: cfg.parallelism,
            ..cfg.clone()
        };
        let mut report = run_bench(&sub)?;
        for row in &mut report.rows {
            row.image_id = format!("{}#k={k}", row.image_id);
        }
        rows.append(&mut report.rows);
    }
    Ok(EvalReport { rows })
}

fn fmt_f64(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.4}")
    }
}

/// RFC 4180 quoting: wrap in quotes when the field contains a comma,
/// quote or newline, doubling embedded quotes.
fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Render the report as `report.csv` (one row per (image, attack)) and
/// `report.md` (one table per attack family). Deterministic: rendering the
/// same report twice yields byte-identical files.
pub fn emit_tables(report: &EvalReport, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;

    let mut csv = String::from(
        "imageId,attackToken,nc,ber,psnrAfterAttack,ssimAfterAttack,embedPsnr,embedSsim,wallTimeMs\n",
    );
    for r in &report.rows {
        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{}",
            csv_field(&r.image_id),
            csv_field(&r.attack_token),
            fmt_f64(r.nc),
            fmt_f64(r.ber),
            fmt_f64(r.psnr_after_attack),
            fmt_f64(r.ssim_after_attack),
            fmt_f64(r.embed_psnr),
            fmt_f64(r.embed_ssim),
            fmt_f64(r.wall_time_ms),
        );
    }
    let csv_path = dir.join("report.csv");
    std::fs::write(&csv_path, csv).map_err(|e| Error::io(&csv_path, e))?;

    // Markdown: embedding fidelity first, then one table per attack family
    // (family = token text up to the first ':').
    let mut md = String::from("# Robustness report\n\n## Embedding fidelity\n\n");
    md.push_str("| image | embed PSNR (dB) | embed SSIM |\n|---|---|---|\n");
    let mut seen = Vec::new();
    for r in &report.rows {
        if !seen.contains(&r.image_id) {
            seen.push(r.image_id.clone());
            let _ = writeln!(
                md,
                "| {} | {} | {} |",
                r.image_id,
                fmt_f64(r.embed_psnr),
                fmt_f64(r.embed_ssim)
            );
        }
    }
    let mut families: Vec<String> = Vec::new();
    for r in &report.rows {
        let fam = r.attack_token.split(':').next().unwrap_or("").to_string();
        if !families.contains(&fam) {
            families.push(fam);
        }
    }
    for fam in families {
        let _ = write!(md, "\n## Attack family: {fam}\n\n");
        md.push_str("| image | attack | NC | BER | PSNR after (dB) | SSIM after |\n|---|---|---|---|---|---|\n");
        for r in &report.rows {
            if r.attack_token.split(':').next().unwrap_or("") == fam {
                let _ = writeln!(
                    md,
                    "| {} | {} | {} | {} | {} | {} |",
                    r.image_id,
                    r.attack_token,
                    fmt_f64(r.nc),
                    fmt_f64(r.ber),
                    fmt_f64(r.psnr_after_attack),
                    fmt_f64(r.ssim_after_attack),
                );
            }
        }
    }
    let md_path = dir.join("report.md");
    std::fs::write(&md_path, md).map_err(|e| Error::io(&md_path, e))
}

/// Run `count` indexed jobs on up to `workers` threads, collecting results.
/// Job order in the output follows the input index, so the result is
/// independent of scheduling.
fn parallel_map<T: Send>(
    workers: usize,
    count: usize,
    job: impl Fn(usize) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    let workers = workers.max(1).min(count.max(1));
    let next = AtomicUsize::new(0);
    let slots: Vec<Mutex<Option<Result<T>>>> = (0..count).map(|_| Mutex::new(None)).collect();
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::Relaxed);
                if idx >= count {
                    break;
                }
                let out = job(idx);
                *slots[idx].lock().unwrap() = Some(out);
            });
        }
    });
    slots
        .into_iter()
        .map(|m| m.into_inner().unwrap().expect("every job slot filled"))
        .collect()
}

/// Images in the shipped synthetic corpus, in generation order.
pub const CORPUS_IMAGES: [&str; 5] = [
    "clouds_a.pgm",
    "clouds_b.pgm",
    "clouds_c.pgm",
    "checker.pgm",
    "gradient.pgm",
];

/// Logos in the shipped synthetic corpus.
pub const CORPUS_LOGOS: [&str; 2] = ["logo_19x52.pbm", "logo_64x64.pbm"];

/// Write the self-contained synthetic corpus: three cloud-like photographs
/// (sums of random Gaussian blobs plus a light noise floor), a soft
/// checkerboard, a diagonal gradient, and the two logos. Everything is a
/// pure function of `seed`.
pub fn generate_corpus(dir: impl AsRef<Path>, seed: u64) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    for (i, name) in CORPUS_IMAGES.iter().enumerate() {
        let img = match i {
            0..=2 => cloud_image(seed.wrapping_add(i as u64).wrapping_mul(0x9E37_79B9)),
            3 => checker_image(seed ^ 0x77),
            _ => gradient_image(seed ^ 0x99),
        };
        let path = dir.join(name);
        img.write_pgm(&path)?;
        written.push(path);
    }
    for (name, (rows, cols)) in CORPUS_LOGOS.iter().zip([(19, 52), (64, 64)]) {
        let path = dir.join(name);
        corpus_logo(rows, cols).write_pbm(&path)?;
        written.push(path);
    }
    Ok(written)
}

const CORPUS_SIDE: usize = 512;

/// Smooth cloudy stand-in for a natural photograph: Gaussian blobs span the
/// low frequencies, a light uniform noise floor supplies fine texture.
fn cloud_image(seed: u64) -> GrayImage {
    let mut rng = XorShift64Star::new(seed);
    let n = CORPUS_SIDE;
    let mut field = vec![0.0f64; n * n];
    for _ in 0..45 {
        let cy = rng.next_unit() * n as f64;
        let cx = rng.next_unit() * n as f64;
        let sigma = 18.0 + rng.next_unit() * 70.0;
        let amp = (rng.next_unit() * 2.0 - 1.0) * 95.0;
        let inv = 1.0 / (2.0 * sigma * sigma);
        for (i, v) in field.iter_mut().enumerate() {
            let dy = (i / n) as f64 - cy;
            let dx = (i % n) as f64 - cx;
            *v += amp * (-(dy * dy + dx * dx) * inv).exp();
        }
    }
    let lo = field.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = field.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };
    let data = field
        .into_iter()
        .map(|v| {
            let base = 30.0 + (v - lo) / span * 195.0;
            let noise = 3.0 * 1.732 * (rng.next_unit() * 2.0 - 1.0);
            round_clip_u8(base + noise) as f64
        })
        .collect();
    GrayImage::new(n, n, data).expect("corpus dimensions are valid")
}

/// Smooth-profile checkerboard: a cosine product, so its spectrum is a few
/// clean spikes rather than a dense harmonic lattice.
fn checker_image(seed: u64) -> GrayImage {
    let mut rng = XorShift64Star::new(seed);
    let n = CORPUS_SIDE;
    let period = 32.0;
    let data = (0..n * n)
        .map(|i| {
            let (y, x) = ((i / n) as f64, (i % n) as f64);
            let v = 128.0
                + 50.0
                    * (2.0 * std::f64::consts::PI * y / period).cos()
                    * (2.0 * std::f64::consts::PI * x / period).cos();
            round_clip_u8(v + 3.0 * 1.732 * (rng.next_unit() * 2.0 - 1.0)) as f64
        })
        .collect();
    GrayImage::new(n, n, data).expect("corpus dimensions are valid")
}

fn gradient_image(seed: u64) -> GrayImage {
    let mut rng = XorShift64Star::new(seed);
    let n = CORPUS_SIDE;
    let data = (0..n * n)
        .map(|i| {
            let (y, x) = ((i / n) as f64, (i % n) as f64);
            let v = 40.0 + 175.0 * (y + x) / (2.0 * (n as f64 - 1.0));
            round_clip_u8(v + 3.0 * 1.732 * (rng.next_unit() * 2.0 - 1.0)) as f64
        })
        .collect();
    GrayImage::new(n, n, data).expect("corpus dimensions are valid")
}

/// Deterministic emblem: a filled disc over a bar lattice.
fn corpus_logo(rows: usize, cols: usize) -> WatermarkBits {
    let cy = rows as f64 / 2.0;
    let cx = cols as f64 / 2.0;
    let radius = rows.min(cols) as f64 * 0.35;
    let bits = (0..rows * cols)
        .map(|i| {
            let (y, x) = (i / cols, i % cols);
            let dy = y as f64 - cy;
            let dx = x as f64 - cx;
            let disc = (dy * dy + dx * dx).sqrt() < radius;
            let bars = y % 7 < 2 && x % 11 < 4;
            (disc || bars) as u8
        })
        .collect();
    WatermarkBits::new(rows, cols, bits).expect("logo dimensions are valid")
}
