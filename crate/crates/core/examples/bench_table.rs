//! Benchmark table: percentage of compression, ratio and PSNR per image.
//!
//! cargo run --release --example bench_table [-- dir-with-pgm-ppm]
//!
//! Without a directory the synthetic corpus at 256x256 is used.

use std::error::Error;
use std::path::Path;
use std::time::Instant;

use wpb_codec::synth::{generate, SynthKind};
use wpb_codec::{decode, encode, format_psnr, load_pnm, metrics, CodecConfig, Image};

fn corpus(dir: Option<&Path>) -> Result<Vec<(String, Image)>, Box<dyn Error>> {
    let Some(dir) = dir else {
        return Ok(SynthKind::ALL
            .iter()
            .map(|&k| (k.name().to_uppercase(), generate(k, 256, 42).unwrap()))
            .collect());
    };
    let mut out = Vec::new();
    let mut entries: Vec<_> = std::fs::read_dir(dir)?.collect::<Result<_, _>>()?;
    entries.sort_by_key(|e| e.path());
    for e in entries {
        let path = e.path();
        if !matches!(path.extension().and_then(|s| s.to_str()), Some("pgm" | "ppm" | "pnm")) {
            continue;
        }
        match load_pnm(&std::fs::read(&path)?) {
            Ok(img) => out.push((path.file_stem().unwrap().to_string_lossy().to_uppercase(), img)),
            Err(err) => eprintln!("skipping {}: {err}", path.display()),
        }
    }
    Ok(out)
}

fn main() -> Result<(), Box<dyn Error>> {
    let dir = std::env::args().nth(1);
    let cfg = CodecConfig::default();
    println!("{:<12} {:>11} {:>9} {:>10} {:>8}", "Image", "Percentage", "Ratio", "PSNR (dB)", "ms");
    for (name, img) in corpus(dir.as_deref().map(Path::new))? {
        let start = Instant::now();
        let bytes = encode(&img, &cfg)?;
        let back = decode(&bytes)?;
        let ms = start.elapsed().as_secs_f64() * 1e3;
        let m = metrics(&img, &back, bytes.len())?;
        println!(
            "{name:<12} {:>11.4} {:>9.2} {:>10} {ms:>8.1}",
            m.percentage_compression,
            m.compression_ratio,
            format_psnr(m.psnr_db)
        );
    }
    Ok(())
}
