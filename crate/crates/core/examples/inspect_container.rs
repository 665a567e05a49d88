//! Parse a WPB1 container and print where each section lives.
//!
//! cargo run --example inspect_container [-- file.wpb]

use std::error::Error;

use wpb_codec::{encode, read_container, CodecConfig, Image, ScanOrder};

fn sample() -> Vec<u8> {
    let img = Image::from_fn(48, 32, |x, y| [(x * 5) as u8, (y * 7) as u8, ((x ^ y) * 4) as u8]).unwrap();
    encode(&img, &CodecConfig::default()).unwrap()
}

fn main() -> Result<(), Box<dyn Error>> {
    let bytes = match std::env::args().nth(1) {
        Some(path) => std::fs::read(path)?,
        None => sample(),
    };
    let c = read_container(&bytes)?;
    let h = &c.header;
    println!("{} bytes", bytes.len());
    println!("header: {:02x?}", &bytes[..13]);
    println!(
        "  {} {}x{} wavelet={} levels={} planes={}",
        h.colorspace.name(),
        h.width,
        h.height,
        h.wavelet,
        h.max_level,
        h.plane_count
    );

    for (i, p) in c.planes.iter().enumerate() {
        let columns = p.scan.iter().filter(|&&s| s == ScanOrder::ColumnMajor).count();
        let values: usize = p.pairs()?.iter().map(|r| r.run as usize).sum();
        println!("plane {i}");
        println!("  tree      {} ({} leaves)", p.topology.bit_string(), p.topology.leaf_count());
        println!("  scan      {} row-major, {columns} column-major", p.scan.len() - columns);
        println!("  quantizer threshold={} step={} delta={}", p.hard_threshold, p.quant_step, p.rle_delta);
        println!("  tables    {} values, {} run lengths", p.value_table.len(), p.run_table.len());
        println!("  payload   {} pairs covering {values} coefficients in {} bytes", p.pair_count, p.payload.len());
    }
    Ok(())
}
