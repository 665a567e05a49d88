//! Rate/distortion as the luma hard threshold grows.

use wpb_codec::synth::{generate, SynthKind};
use wpb_codec::{decode, encode, format_psnr, metrics, quantize_image, CodecConfig};

fn main() {
    let img = generate(SynthKind::Gradient, 128, 0).unwrap();
    println!("{:>9} {:>9} {:>9} {:>10}", "threshold", "nonzero", "ratio", "psnr");
    for t in [0.0, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0] {
        let cfg = CodecConfig::uniform(t, 1.0);
        let nonzero: usize = quantize_image(&img, &cfg)
            .unwrap()
            .iter()
            .map(|p| p.symbols.iter().filter(|&&s| s != 0).count())
            .sum();
        let bytes = encode(&img, &cfg).unwrap();
        let m = metrics(&img, &decode(&bytes).unwrap(), bytes.len()).unwrap();
        println!("{t:>9} {nonzero:>9} {:>9.2} {:>10}", m.compression_ratio, format_psnr(m.psnr_db));
    }
}
