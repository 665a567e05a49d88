//! Encode and decode one image, report ratio and PSNR.
//!
//! cargo run --example roundtrip [-- input.pgm|input.ppm [out.wpb]]
//!
//! Without arguments a 256x256 gradient is used.

use std::error::Error;

use wpb_codec::synth::{generate, SynthKind};
use wpb_codec::{decode, encode, format_psnr, load_pnm, metrics, CodecConfig};

fn main() -> Result<(), Box<dyn Error>> {
    let mut args = std::env::args().skip(1);
    let (name, img) = match args.next() {
        Some(path) => (path.clone(), load_pnm(&std::fs::read(&path)?)?),
        None => ("gradient 256x256".to_string(), generate(SynthKind::Gradient, 256, 0)?),
    };

    let cfg = CodecConfig::default();
    let bytes = encode(&img, &cfg)?;
    let back = decode(&bytes)?;
    let m = metrics(&img, &back, bytes.len())?;

    println!("{name}: {}x{}x{}", img.width(), img.height(), img.channels());
    println!("  raw bytes        {}", img.raw_len());
    println!("  container bytes  {}", bytes.len());
    println!("  ratio            {:.2}", m.compression_ratio);
    println!("  percent          {:.4}", m.percentage_compression);
    println!("  psnr             {} dB", format_psnr(m.psnr_db));

    if let Some(out) = args.next() {
        std::fs::write(&out, &bytes)?;
        println!("wrote {out}");
    }
    Ok(())
}
