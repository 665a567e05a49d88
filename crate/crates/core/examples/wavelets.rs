//! Filter taps, reconstruction error and energy compaction of a single
//! analysis level for each supported wavelet.

use wpb_codec::synth::{generate, SynthKind};
use wpb_codec::{analyze2d, get_filters, synthesize2d, Plane, Subband, WaveletId};

fn energy(p: &Plane) -> f64 {
    p.values().iter().map(|v| v * v).sum()
}

fn main() {
    let img = generate(SynthKind::Gradient, 63, 0).unwrap();
    let plane = Plane::from_fn(63, 63, |x, y| f64::from(img.sample(x, y, 0))).unwrap();

    for id in WaveletId::ALL {
        let f = get_filters(id);
        println!("{id} ({})", if id.is_orthogonal() { "orthogonal" } else { "biorthogonal" });
        println!("  analysis lo {:?}", f.analysis_lo);
        println!("  analysis hi {:?}", f.analysis_hi);

        let split = analyze2d(&plane, &f).unwrap();
        let back = synthesize2d(&split, &f, 63, 63).unwrap();
        println!("  63x63 reconstruction error {:.2e}", back.max_abs_diff(&plane).unwrap());

        let total: f64 = Subband::ORDER.iter().map(|&b| energy(split.get(b))).sum();
        for b in Subband::ORDER {
            let band = split.get(b);
            let (w, h) = band.dims();
            println!("  {} {w}x{h} energy {:6.2}%", b.letter(), 100.0 * energy(band) / total);
        }
    }
}
