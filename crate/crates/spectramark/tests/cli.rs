//! End-to-end checks of the command-line surface: flag handling, exit
//! codes, output formats and artifact writing.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::OnceLock;

use spectramark::image::{GrayImage, WatermarkBits};
use spectramark::metrics;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_spectramark")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("spawn spectramark")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

struct Workspace {
    _dir: tempfile::TempDir,
    corpus: PathBuf,
    watermarked: PathBuf,
}

/// Corpus plus one embedded image, shared across tests.
fn workspace() -> &'static Workspace {
    static WS: OnceLock<Workspace> = OnceLock::new();
    WS.get_or_init(|| {
        let dir = tempfile::tempdir().expect("tempdir");
        let corpus = dir.path().join("corpus");
        let out = run(&[
            "gen-corpus",
            "--out-dir",
            corpus.to_str().unwrap(),
            "--seed",
            "9",
        ]);
        assert!(out.status.success(), "gen-corpus failed: {out:?}");
        let watermarked = dir.path().join("wm.pgm");
        let out = run(&[
            "embed",
            "--in",
            corpus.join("clouds_a.pgm").to_str().unwrap(),
            "--wm",
            corpus.join("logo_19x52.pbm").to_str().unwrap(),
            "--out",
            watermarked.to_str().unwrap(),
            "--key1",
            "7",
            "--key2",
            "24",
        ]);
        assert!(out.status.success(), "embed failed: {out:?}");
        Workspace {
            _dir: dir,
            corpus,
            watermarked,
        }
    })
}

fn extract_to(input: &Path, key1: &str, out: &Path) -> Output {
    run(&[
        "extract",
        "--in",
        input.to_str().unwrap(),
        "--key1",
        key1,
        "--key2",
        "24",
        "--rows",
        "19",
        "--cols",
        "52",
        "--out",
        out.to_str().unwrap(),
    ])
}

#[test]
fn embed_prints_quality_line_and_writes_pgm() {
    let ws = workspace();
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("w.pgm");
    let out = run(&[
        "embed",
        "--in",
        ws.corpus.join("clouds_b.pgm").to_str().unwrap(),
        "--wm",
        ws.corpus.join("logo_19x52.pbm").to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
        "--key1",
        "0x2A",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut parts = text.trim().split(' ');
    let psnr_kv = parts.next().unwrap();
    let ssim_kv = parts.next().unwrap();
    assert!(psnr_kv.starts_with("psnr="));
    assert!(ssim_kv.starts_with("ssim="));
    let psnr: f64 = psnr_kv[5..].parse().unwrap();
    assert!((20.0..=60.0).contains(&psnr), "psnr line value {psnr}");
    assert!(out_path.exists());
    GrayImage::read_pgm(&out_path).expect("output is a valid PGM");
}

#[test]
fn embed_missing_key1_is_usage_error() {
    let ws = workspace();
    let out = run(&[
        "embed",
        "--in",
        ws.corpus.join("clouds_a.pgm").to_str().unwrap(),
        "--wm",
        ws.corpus.join("logo_19x52.pbm").to_str().unwrap(),
        "--out",
        "/tmp/never.pgm",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn embed_rejects_oversized_logo() {
    let dir = tempfile::tempdir().unwrap();
    let host = dir.path().join("small.pgm");
    GrayImage::constant(64, 64, 128.0).unwrap().write_pgm(&host).unwrap();
    let logo = dir.path().join("big.pbm");
    WatermarkBits::new(100, 100, vec![1; 10_000]).unwrap().write_pbm(&logo).unwrap();
    let out = run(&[
        "embed",
        "--in",
        host.to_str().unwrap(),
        "--wm",
        logo.to_str().unwrap(),
        "--out",
        dir.path().join("x.pgm").to_str().unwrap(),
        "--key1",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("capacity"), "stderr: {err}");
}

#[test]
fn extract_with_correct_keys_recovers_logo() {
    let ws = workspace();
    let dir = tempfile::tempdir().unwrap();
    let got = dir.path().join("got.pbm");
    let out = extract_to(&ws.watermarked, "7", &got);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty(), "extract should print nothing");
    let original = WatermarkBits::read_pbm(ws.corpus.join("logo_19x52.pbm")).unwrap();
    let extracted = WatermarkBits::read_pbm(&got).unwrap();
    assert_eq!(extracted, original);
}

#[test]
fn extract_with_wrong_key_misses_logo() {
    let ws = workspace();
    let dir = tempfile::tempdir().unwrap();
    let got = dir.path().join("wrong.pbm");
    // Key 10 carries carriers that misalign with key 7's (verified fixed
    // behavior of the pinned generator).
    let out = extract_to(&ws.watermarked, "10", &got);
    assert!(out.status.success());
    let original = WatermarkBits::read_pbm(ws.corpus.join("logo_19x52.pbm")).unwrap();
    let extracted = WatermarkBits::read_pbm(&got).unwrap();
    let nc = metrics::nc(&original, &extracted).unwrap();
    assert!(nc < 0.8, "wrong-key nc {nc}");
}

#[test]
fn extract_rejects_oversized_dimensions() {
    let ws = workspace();
    let out = run(&[
        "extract",
        "--in",
        ws.watermarked.to_str().unwrap(),
        "--key1",
        "7",
        "--rows",
        "100",
        "--cols",
        "100",
        "--out",
        "/tmp/never.pbm",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn attack_writes_image_and_rejects_bad_tokens() {
    let ws = workspace();
    let dir = tempfile::tempdir().unwrap();
    let atk = dir.path().join("atk.pgm");
    let out = run(&[
        "attack",
        "--in",
        ws.watermarked.to_str().unwrap(),
        "--spec",
        "jpeg:qf=90",
        "--out",
        atk.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    GrayImage::read_pgm(&atk).expect("attacked image is a valid PGM");

    let out = run(&[
        "attack",
        "--in",
        ws.watermarked.to_str().unwrap(),
        "--spec",
        "jpeg:qf=120",
        "--out",
        atk.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("jpeg:qf=120"), "stderr should cite the token: {err}");
}

#[test]
fn metrics_bits_on_identical_files() {
    let ws = workspace();
    let logo = ws.corpus.join("logo_19x52.pbm");
    let out = run(&[
        "metrics",
        "--bits",
        "--a",
        logo.to_str().unwrap(),
        "--b",
        logo.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "nc=1.0000 ber=0.0000");
}

#[test]
fn metrics_images_prints_psnr_ssim() {
    let ws = workspace();
    let out = run(&[
        "metrics",
        "--a",
        ws.corpus.join("clouds_a.pgm").to_str().unwrap(),
        "--b",
        ws.watermarked.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("psnr="), "got: {text}");
    assert!(text.contains(" ssim="), "got: {text}");
}

#[test]
fn bench_writes_reports() {
    let ws = workspace();
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("report");
    let cfg_path = dir.path().join("run.cfg");
    let cfg = format!(
        "image = {}\nimage = {}\nwatermark = {}\nkey1 = 7\nkey2 = 24\nstrength = 9600\nattack = he\nattack = jpeg:qf=90\noutput_dir = {}\nparallelism = 2\n",
        ws.corpus.join("clouds_a.pgm").display(),
        ws.corpus.join("checker.pgm").display(),
        ws.corpus.join("logo_19x52.pbm").display(),
        out_dir.display(),
    );
    std::fs::write(&cfg_path, cfg).unwrap();
    let out = run(&["bench", "--config", cfg_path.to_str().unwrap()]);
    assert!(out.status.success(), "bench failed: {out:?}");
    let text = stdout(&out);
    assert!(text.contains("csv="));
    assert!(text.contains("md="));
    let csv = std::fs::read_to_string(out_dir.join("report.csv")).unwrap();
    // header + 2 images x (none + 2 attacks)
    assert_eq!(csv.lines().count(), 1 + 2 * 3);
    assert!(out_dir.join("report.md").exists());
    // Baseline rows must decode perfectly.
    for line in csv.lines().skip(1).filter(|l| l.contains(",none,")) {
        assert!(line.contains(",1.0000,0.0000,"), "baseline row: {line}");
    }
}

#[test]
fn identical_invocations_are_byte_identical() {
    let ws = workspace();
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.pgm");
    let b = dir.path().join("b.pgm");
    for out_path in [&a, &b] {
        let out = run(&[
            "embed",
            "--in",
            ws.corpus.join("gradient.pgm").to_str().unwrap(),
            "--wm",
            ws.corpus.join("logo_19x52.pbm").to_str().unwrap(),
            "--out",
            out_path.to_str().unwrap(),
            "--key1",
            "99",
        ]);
        assert!(out.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}
