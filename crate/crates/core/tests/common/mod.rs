//! Test-only reference implementations, written independently of the
//! library's transform and tree-growing code.

#![allow(dead_code)]

use wpb_codec::{FilterPair, Plane, Topology};

/// Dense `2*ceil(n/2) x n` analysis matrix: low-pass rows first, then
/// high-pass rows. Odd lengths are padded with a copy of the last sample,
/// then the even-length signal is filtered circularly.
pub fn analysis_matrix(f: &FilterPair, n: usize) -> Vec<Vec<f64>> {
    let m = n + n % 2;
    // pad: m x n
    let pad = |i: usize| -> usize { i.min(n - 1) };
    let mut rows = Vec::with_capacity(m);
    for taps in [&f.analysis_lo, &f.analysis_hi] {
        for k in 0..m / 2 {
            let mut row = vec![0.0; n];
            for (j, &t) in taps.iter().enumerate() {
                row[pad((2 * k + j) % m)] += t;
            }
            rows.push(row);
        }
    }
    rows
}

fn apply(mat: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    mat.iter().map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

/// One 2D level through dense matrices; returns `[a, h, v, d]`.
pub fn dense_split(p: &Plane, f: &FilterPair) -> [Plane; 4] {
    let (w, h) = p.dims();
    let (mx, my) = (analysis_matrix(f, w), analysis_matrix(f, h));
    let (hw, hh) = (w.div_ceil(2), h.div_ceil(2));
    // rows
    let rows: Vec<Vec<f64>> = p.values().chunks(w).map(|r| apply(&mx, r)).collect();
    // columns
    let mut out = vec![vec![0.0; 2 * hw]; 2 * hh];
    for x in 0..2 * hw {
        let col: Vec<f64> = (0..h).map(|y| rows[y][x]).collect();
        let t = apply(&my, &col);
        for y in 0..2 * hh {
            out[y][x] = t[y];
        }
    }
    let band = |x0: usize, y0: usize| {
        Plane::from_fn(hw, hh, |x, y| out[y0 + y][x0 + x]).unwrap()
    };
    // x low / y low = a; x low / y high = h; x high / y low = v; both high = d
    [band(0, 0), band(0, hh), band(hw, 0), band(hw, hh)]
}

pub fn count_above(p: &Plane, t: f64) -> usize {
    p.values().iter().filter(|v| v.abs() > t).count()
}

/// Every node of the complete packet tree to `depth`, keyed by path index.
pub struct FullTree {
    pub block: Plane,
    pub children: Option<Box<[FullTree; 4]>>,
}

pub fn full_tree(p: &Plane, f: &FilterPair, depth: usize) -> FullTree {
    let children = if depth == 0 || p.width() < 2 || p.height() < 2 {
        None
    } else {
        let [a, h, v, d] = dense_split(p, f);
        Some(Box::new([
            full_tree(&a, f, depth - 1),
            full_tree(&h, f, depth - 1),
            full_tree(&v, f, depth - 1),
            full_tree(&d, f, depth - 1),
        ]))
    };
    FullTree { block: p.clone(), children }
}

/// All pruned quadtree shapes of depth at most `depth`.
pub fn all_topologies(depth: usize) -> Vec<Topology> {
    if depth == 0 {
        return vec![Topology::Leaf];
    }
    let sub = all_topologies(depth - 1);
    let mut out = vec![Topology::Leaf];
    for a in &sub {
        for h in &sub {
            for v in &sub {
                for d in &sub {
                    out.push(Topology::split([a.clone(), h.clone(), v.clone(), d.clone()]));
                }
            }
        }
    }
    out
}

/// Whether `shape` obeys the growth rule everywhere: every split node has
/// child cost sum <= its own cost, and every leaf that could still split has
/// child cost sum > its own cost.
fn consistent(shape: &Topology, node: &FullTree, t: f64) -> bool {
    let child_sum = |n: &FullTree| -> Option<usize> {
        n.children.as_ref().map(|c| c.iter().map(|c| count_above(&c.block, t)).sum())
    };
    let own = count_above(&node.block, t);
    match (shape, &node.children) {
        (Topology::Leaf, None) => true,
        (Topology::Leaf, Some(_)) => child_sum(node).unwrap() > own,
        (Topology::Split(_), None) => false,
        (Topology::Split(s), Some(c)) => {
            child_sum(node).unwrap() <= own && s.iter().zip(c.iter()).all(|(s, c)| consistent(s, c, t))
        }
    }
}

fn leaves_of<'a>(shape: &Topology, node: &'a FullTree, out: &mut Vec<&'a Plane>) {
    match (shape, &node.children) {
        (Topology::Split(s), Some(c)) => s.iter().zip(c.iter()).for_each(|(s, c)| leaves_of(s, c, out)),
        _ => out.push(&node.block),
    }
}

/// Brute force: enumerate every admissible shape and keep the ones consistent
/// with the rule. Exactly one should survive.
pub fn oracle_best_tree(p: &Plane, f: &FilterPair, depth: usize, t: f64) -> Vec<(Topology, Vec<Plane>)> {
    let full = full_tree(p, f, depth);
    all_topologies(depth)
        .into_iter()
        .filter(|shape| consistent(shape, &full, t))
        .map(|shape| {
            let mut leaves = Vec::new();
            leaves_of(&shape, &full, &mut leaves);
            let leaves = leaves.into_iter().cloned().collect();
            (shape, leaves)
        })
        .collect()
}
