//! Show how the best-basis tree adapts to image content and to the cost
//! threshold.

use wpb_codec::synth::{generate, SynthKind};
use wpb_codec::{build_best_tree, cost, get_filters, CostConfig, Plane, WaveletId};

fn luma(kind: SynthKind) -> Plane {
    let img = generate(kind, 64, 1).unwrap();
    Plane::from_fn(64, 64, |x, y| f64::from(img.sample(x, y, 0))).unwrap()
}

fn main() {
    let filters = get_filters(WaveletId::Db2);
    println!("{:<11} {:>5} {:>6} {:>6} {:>9} {:>10}  histogram", "image", "T", "leaves", "depth", "root", "leaf sum");
    for kind in SynthKind::ALL {
        let plane = luma(kind);
        for t in [0.0, 4.0, 32.0] {
            let tree = build_best_tree(&plane, &filters, &CostConfig::new(t, 3)).unwrap();
            let topo = tree.topology();
            let leaf_cost: usize = tree.flatten().iter().map(|(_, b)| cost(b, t)).sum();
            println!(
                "{:<11} {:>5} {:>6} {:>6} {:>9} {:>10}  {:?}",
                kind.name(),
                t,
                topo.leaf_count(),
                topo.depth(),
                cost(&plane, t),
                leaf_cost,
                topo.depth_histogram()
            );
        }
    }

    // the leaf list in coding order for one tree
    let tree = build_best_tree(&luma(SynthKind::Gradient), &filters, &CostConfig::new(4.0, 3)).unwrap();
    println!("\ngradient, T=4 leaves:");
    for (path, block) in tree.flatten() {
        let name: String = path.iter().map(|b| b.letter()).collect();
        let (w, h) = block.dims();
        println!("  {:<4} {w}x{h}", if name.is_empty() { "root" } else { &name });
    }
}
