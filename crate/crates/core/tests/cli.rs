//! Drives the `wpb` binary end to end through temporary files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;
use wpb_codec::{load_pnm, save_pnm, Image};

fn wpb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wpb")).args(args).output().expect("spawn wpb")
}

fn ok(args: &[&str]) -> String {
    let out = wpb(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn fails(args: &[&str]) -> String {
    let out = wpb(args);
    assert_eq!(out.status.code(), Some(1), "{args:?}");
    String::from_utf8(out.stderr).unwrap()
}

struct Scratch(TempDir);

impl Scratch {
    fn new() -> Self {
        Scratch(tempfile::tempdir().unwrap())
    }

    fn path(&self, name: &str) -> PathBuf {
        self.0.path().join(name)
    }

    fn arg(&self, name: &str) -> String {
        self.path(name).to_string_lossy().into_owned()
    }
}

fn read_image(path: &Path) -> Image {
    load_pnm(&std::fs::read(path).unwrap()).unwrap()
}

fn field(line: &str, key: &str) -> String {
    line.split_whitespace()
        .find_map(|kv| kv.strip_prefix(key).and_then(|v| v.strip_prefix('=')))
        .unwrap_or_else(|| panic!("no {key} in {line:?}"))
        .to_string()
}

#[test]
fn gen_writes_the_documented_patterns() {
    let s = Scratch::new();
    ok(&["gen", "horizontal", "32", &s.arg("h.pgm")]);
    ok(&["gen", "vertical", "32", &s.arg("v.pgm")]);
    let (h, v) = (read_image(&s.path("h.pgm")), read_image(&s.path("v.pgm")));
    assert_eq!((h.width(), h.height(), h.channels()), (32, 32, 1));
    for y in 0..32 {
        let expect = if (y / 8) % 2 == 0 { 0 } else { 255 };
        assert!((0..32).all(|x| h.sample(x, y, 0) == expect), "row {y}");
        assert!((0..32).all(|x| h.sample(x, y, 0) == v.sample(y, x, 0)));
    }

    ok(&["gen", "noise", "16", &s.arg("a.pgm"), "--seed", "7"]);
    ok(&["gen", "noise", "16", &s.arg("b.pgm"), "--seed", "7"]);
    ok(&["gen", "noise", "16", &s.arg("c.pgm"), "--seed", "8"]);
    let a = std::fs::read(s.path("a.pgm")).unwrap();
    assert_eq!(a, std::fs::read(s.path("b.pgm")).unwrap());
    assert_ne!(a, std::fs::read(s.path("c.pgm")).unwrap());
}

#[test]
fn horizontal_round_trip_meets_targets() {
    let s = Scratch::new();
    ok(&["gen", "horizontal", "256", &s.arg("h.pgm")]);
    let line = ok(&["encode", &s.arg("h.pgm"), &s.arg("h.wpb")]);
    assert!(field(&line, "ratio").parse::<f64>().unwrap() >= 10.0, "{line}");
    assert_eq!(field(&line, "psnr"), "n/a");
    ok(&["decode", &s.arg("h.wpb"), &s.arg("back.pgm")]);
    let db = ok(&["metrics", &s.arg("h.pgm"), &s.arg("back.pgm")]);
    let db = db.trim();
    assert!(db == "inf" || db.parse::<f64>().unwrap() >= 40.0, "{db}");
}

#[test]
fn verify_matches_separate_metrics() {
    let s = Scratch::new();
    ok(&["gen", "noise", "64", &s.arg("n.pgm")]);
    let line = ok(&["encode", &s.arg("n.pgm"), &s.arg("n.wpb"), "--verify", "--wavelet", "db4", "--step", "3"]);
    ok(&["decode", &s.arg("n.wpb"), &s.arg("back.pgm")]);
    let separate: f64 = ok(&["metrics", &s.arg("n.pgm"), &s.arg("back.pgm")]).trim().parse().unwrap();
    let reported: f64 = field(&line, "psnr").parse().unwrap();
    assert!((separate - reported).abs() <= 1e-4, "{separate} vs {reported}");
    let size = std::fs::metadata(s.path("n.wpb")).unwrap().len() as f64;
    let ratio: f64 = field(&line, "ratio").parse().unwrap();
    assert!((ratio - 64.0 * 64.0 / size).abs() < 1e-4);
}

#[test]
fn info_reports_tree_shape() {
    let s = Scratch::new();
    // one bright sample per Haar block: the split spreads it over four bands,
    // so the undecomposed plane is cheaper
    let sparse = Image::from_fn(16, 16, |x, y| [if x % 2 == 0 && y % 2 == 0 { 12u8 } else { 0 }]);
    std::fs::write(s.path("s.pgm"), save_pnm(&sparse.unwrap())).unwrap();
    ok(&["encode", &s.arg("s.pgm"), &s.arg("s.wpb"), "--wavelet", "haar", "--cost-threshold", "5"]);
    let info = ok(&["info", &s.arg("s.wpb")]);
    let lines: Vec<&str> = info.lines().collect();
    assert!(lines[0].starts_with("format=WPB1 version=1 colorspace=gray width=16 height=16 wavelet=haar"), "{info}");
    assert_eq!(lines[1], "planes=1 leaves=1 depth=0");
    assert!(lines[2].starts_with("plane 0: leaves=1 depth=0 histogram=0:1 "), "{info}");

    // nothing exceeds the cost threshold, every comparison ties, ties split
    ok(&["gen", "constant", "16", &s.arg("c.pgm")]);
    ok(&["encode", &s.arg("c.pgm"), &s.arg("c.wpb"), "--levels", "2", "--cost-threshold", "1000"]);
    let info = ok(&["info", &s.arg("c.wpb")]);
    assert_eq!(info.lines().nth(1).unwrap(), "planes=1 leaves=16 depth=2");
    assert!(info.contains("histogram=2:16 "), "{info}");

    let rgb = Image::from_fn(8, 8, |x, y| [(x * 30) as u8, (y * 30) as u8, 90]);
    std::fs::write(s.path("rgb.ppm"), save_pnm(&rgb.unwrap())).unwrap();
    ok(&["encode", &s.arg("rgb.ppm"), &s.arg("rgb.wpb")]);
    let info = ok(&["info", &s.arg("rgb.wpb")]);
    assert!(info.contains("colorspace=yuv"));
    assert!(info.lines().nth(1).unwrap().starts_with("planes=3 "));
    assert_eq!(info.lines().filter(|l| l.starts_with("plane ")).count(), 3);
}

#[test]
fn metrics_of_known_pairs() {
    let s = Scratch::new();
    let a = Image::from_fn(4, 4, |_, _| [100u8]);
    let b = Image::from_fn(4, 4, |_, _| [101u8]);
    std::fs::write(s.path("a.pgm"), save_pnm(&a.unwrap())).unwrap();
    std::fs::write(s.path("b.pgm"), save_pnm(&b.unwrap())).unwrap();
    assert_eq!(ok(&["metrics", &s.arg("a.pgm"), &s.arg("a.pgm")]).trim(), "inf");
    assert_eq!(ok(&["metrics", &s.arg("a.pgm"), &s.arg("b.pgm")]).trim(), "48.1308");

    let c = Image::from_fn(4, 5, |_, _| [100u8]);
    std::fs::write(s.path("c.pgm"), save_pnm(&c.unwrap())).unwrap();
    fails(&["metrics", &s.arg("a.pgm"), &s.arg("c.pgm")]);
}

#[test]
fn failures_exit_with_status_one() {
    let s = Scratch::new();
    let err = fails(&["encode", &s.arg("missing.pgm"), &s.arg("x.wpb")]);
    assert!(err.contains("cannot open"), "{err}");
    fails(&["decode", &s.arg("missing.wpb"), &s.arg("x.pgm")]);

    ok(&["gen", "gradient", "16", &s.arg("g.pgm")]);
    let err = fails(&["encode", &s.arg("g.pgm"), &s.arg("x.wpb"), "--wavelet", "sym8"]);
    assert!(err.contains("usage error"), "{err}");
    fails(&["encode", &s.arg("g.pgm"), &s.arg("x.wpb"), "--levels", "9"]);

    ok(&["encode", &s.arg("g.pgm"), &s.arg("g.wpb")]);
    let mut bytes = std::fs::read(s.path("g.wpb")).unwrap();
    bytes[0] = b'X';
    std::fs::write(s.path("bad.wpb"), &bytes).unwrap();
    fails(&["decode", &s.arg("bad.wpb"), &s.arg("x.pgm")]);
    fails(&["info", &s.arg("bad.wpb")]);

    let unwritable = s.path("no/such/dir/out.pgm");
    fails(&["decode", &s.arg("g.wpb"), unwritable.to_str().unwrap()]);
    assert!(!s.path("x.pgm").exists());
}

#[test]
fn syntax_errors_exit_with_status_two() {
    assert_eq!(wpb(&["encode"]).status.code(), Some(2));
    assert_eq!(wpb(&["gen", "stripes", "16", "x.pgm"]).status.code(), Some(2));
}
