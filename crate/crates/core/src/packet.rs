//! Wavelet-packet best tree.
//!
//! The tree is grown top-down. A node is decomposed once, and its four children
//! are kept only when the sum of their threshold-count costs does not exceed
//! the node's own cost; otherwise the node becomes a leaf and the children are
//! dropped. Kept children are examined the same way until `max_level`.

use crate::error::{Error, Result};
use crate::pixmap::Plane;
use crate::wavelet::{analyze2d, half, synthesize2d, FilterPair, QuadSplit, Subband, WaveletId};

/// Parameters of the best-tree search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostConfig {
    /// Magnitude a coefficient must strictly exceed to count toward the cost.
    pub threshold: f64,
    /// Deepest decomposition level `J`.
    pub max_level: u8,
}

impl CostConfig {
    pub fn new(threshold: f64, max_level: u8) -> Self {
        CostConfig { threshold, max_level }
    }

    pub fn validate_for(&self, width: usize, height: usize) -> Result<()> {
        if !(self.threshold >= 0.0 && self.threshold.is_finite()) {
            return Err(Error::invalid(format!("cost threshold {} must be finite and >= 0", self.threshold)));
        }
        let limit = max_admissible_level(width, height);
        if self.max_level < 1 || u32::from(self.max_level) > limit {
            return Err(Error::invalid(format!(
                "max level {} outside 1..={limit} for a {width}x{height} plane",
                self.max_level
            )));
        }
        Ok(())
    }
}

/// `floor(log2(min(width, height)))`, the deepest level the search accepts.
pub fn max_admissible_level(width: usize, height: usize) -> u32 {
    width.min(height).max(1).ilog2()
}

/// Threshold-count cost: number of values with `|x| > threshold`.
pub fn cost_of(values: &[f64], threshold: f64) -> usize {
    values.iter().filter(|v| v.abs() > threshold).count()
}

pub fn cost(block: &Plane, threshold: f64) -> usize {
    cost_of(block.values(), threshold)
}

/// Shape of a packet tree without coefficient data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Topology {
    Leaf,
    Split(Box<[Topology; 4]>),
}

impl Topology {
    pub fn split(children: [Topology; 4]) -> Self {
        Topology::Split(Box::new(children))
    }

    /// A complete tree of the given depth.
    pub fn full(depth: u32) -> Self {
        if depth == 0 {
            Topology::Leaf
        } else {
            Topology::split(std::array::from_fn(|_| Topology::full(depth - 1)))
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Topology::Leaf => 1,
            Topology::Split(c) => 1 + c.iter().map(Topology::node_count).sum::<usize>(),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Topology::Leaf => 1,
            Topology::Split(c) => c.iter().map(Topology::leaf_count).sum(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Topology::Leaf => 0,
            Topology::Split(c) => 1 + c.iter().map(Topology::depth).max().unwrap_or(0),
        }
    }

    /// Leaf count per depth, index = depth.
    pub fn depth_histogram(&self) -> Vec<usize> {
        let mut hist = vec![0; self.depth() + 1];
        self.visit_leaves(&mut Vec::new(), &mut |path| hist[path.len()] += 1);
        hist
    }

    /// Paths of all leaves in coding order (preorder, children A, H, V, D).
    pub fn leaf_paths(&self) -> Vec<Vec<Subband>> {
        let mut out = Vec::new();
        self.visit_leaves(&mut Vec::new(), &mut |path| out.push(path.to_vec()));
        out
    }

    fn visit_leaves(&self, path: &mut Vec<Subband>, f: &mut impl FnMut(&[Subband])) {
        match self {
            Topology::Leaf => f(path),
            Topology::Split(children) => {
                for (band, child) in Subband::ORDER.into_iter().zip(children.iter()) {
                    path.push(band);
                    child.visit_leaves(path, f);
                    path.pop();
                }
            }
        }
    }

    /// Block dimensions of every leaf in coding order, for a root of
    /// `width x height`. Fails if a split would touch an axis shorter than 2.
    pub fn leaf_dims(&self, width: usize, height: usize) -> Result<Vec<(usize, usize)>> {
        fn walk(t: &Topology, w: usize, h: usize, out: &mut Vec<(usize, usize)>) -> Result<()> {
            match t {
                Topology::Leaf => {
                    out.push((w, h));
                    Ok(())
                }
                Topology::Split(children) => {
                    if w < 2 || h < 2 {
                        return Err(Error::CorruptTree(format!("split of an undecomposable {w}x{h} node")));
                    }
                    children.iter().try_for_each(|c| walk(c, half(w), half(h), out))
                }
            }
        }
        let mut out = Vec::new();
        walk(self, width, height, &mut out)?;
        Ok(out)
    }

    /// `1` per internal node, `0` per leaf, preorder.
    pub fn to_bits(&self) -> Vec<bool> {
        fn walk(t: &Topology, out: &mut Vec<bool>) {
            match t {
                Topology::Leaf => out.push(false),
                Topology::Split(c) => {
                    out.push(true);
                    c.iter().for_each(|c| walk(c, out));
                }
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// Renders the preorder bit string, e.g. `"10000"`.
    pub fn bit_string(&self) -> String {
        self.to_bits().into_iter().map(|b| if b { '1' } else { '0' }).collect()
    }
}

/// A node of the best tree; leaves own their coefficient block.
#[derive(Debug, Clone, PartialEq)]
pub enum PacketNode {
    Leaf(Plane),
    Split(Box<[PacketNode; 4]>),
}

impl PacketNode {
    fn topology(&self) -> Topology {
        match self {
            PacketNode::Leaf(_) => Topology::Leaf,
            PacketNode::Split(c) => Topology::split(std::array::from_fn(|i| c[i].topology())),
        }
    }
}

/// Pruned packet decomposition of one plane.
#[derive(Debug, Clone, PartialEq)]
pub struct PacketTree {
    pub root: PacketNode,
    pub wavelet: WaveletId,
    pub width: usize,
    pub height: usize,
}

impl PacketTree {
    pub fn topology(&self) -> Topology {
        self.root.topology()
    }

    pub fn leaf_count(&self) -> usize {
        self.flatten().len()
    }

    /// Leaves in coding order with their paths.
    pub fn flatten(&self) -> Vec<(Vec<Subband>, &Plane)> {
        fn walk<'a>(n: &'a PacketNode, path: &mut Vec<Subband>, out: &mut Vec<(Vec<Subband>, &'a Plane)>) {
            match n {
                PacketNode::Leaf(block) => out.push((path.clone(), block)),
                PacketNode::Split(children) => {
                    for (band, child) in Subband::ORDER.into_iter().zip(children.iter()) {
                        path.push(band);
                        walk(child, path, out);
                        path.pop();
                    }
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut Vec::new(), &mut out);
        out
    }

    /// Same topology, each leaf block replaced by `f(path, block)`.
    pub fn map_leaves(&self, mut f: impl FnMut(&[Subband], &Plane) -> Plane) -> PacketTree {
        fn walk(n: &PacketNode, path: &mut Vec<Subband>, f: &mut impl FnMut(&[Subband], &Plane) -> Plane) -> PacketNode {
            match n {
                PacketNode::Leaf(block) => PacketNode::Leaf(f(path, block)),
                PacketNode::Split(children) => PacketNode::Split(Box::new(std::array::from_fn(|i| {
                    path.push(Subband::ORDER[i]);
                    let c = walk(&children[i], path, f);
                    path.pop();
                    c
                }))),
            }
        }
        PacketTree {
            root: walk(&self.root, &mut Vec::new(), &mut f),
            wavelet: self.wavelet,
            width: self.width,
            height: self.height,
        }
    }

    /// Rebuilds a tree from its shape and leaf blocks given in coding order.
    pub fn from_leaves(
        topology: &Topology,
        wavelet: WaveletId,
        width: usize,
        height: usize,
        blocks: Vec<Plane>,
    ) -> Result<PacketTree> {
        fn walk(
            t: &Topology,
            w: usize,
            h: usize,
            blocks: &mut std::vec::IntoIter<Plane>,
        ) -> Result<PacketNode> {
            match t {
                Topology::Leaf => {
                    let block = blocks.next().ok_or_else(|| Error::CorruptTree("too few leaf blocks".into()))?;
                    if block.dims() != (w, h) {
                        return Err(Error::CorruptTree(format!(
                            "leaf block is {}x{}, expected {w}x{h}",
                            block.width(),
                            block.height()
                        )));
                    }
                    Ok(PacketNode::Leaf(block))
                }
                Topology::Split(children) => {
                    if w < 2 || h < 2 {
                        return Err(Error::CorruptTree(format!("split of an undecomposable {w}x{h} node")));
                    }
                    let (cw, ch) = (half(w), half(h));
                    let [a, hh, v, d] = &**children;
                    Ok(PacketNode::Split(Box::new([
                        walk(a, cw, ch, blocks)?,
                        walk(hh, cw, ch, blocks)?,
                        walk(v, cw, ch, blocks)?,
                        walk(d, cw, ch, blocks)?,
                    ])))
                }
            }
        }
        let mut iter = blocks.into_iter();
        let root = walk(topology, width, height, &mut iter)?;
        if iter.next().is_some() {
            return Err(Error::CorruptTree("too many leaf blocks".into()));
        }
        Ok(PacketTree { root, wavelet, width, height })
    }
}

/// Grows the best tree of `p` top-down.
pub fn build_best_tree(p: &Plane, f: &FilterPair, cfg: &CostConfig) -> Result<PacketTree> {
    cfg.validate_for(p.width(), p.height())?;

    fn grow(block: Plane, depth: u8, f: &FilterPair, cfg: &CostConfig) -> Result<PacketNode> {
        if depth >= cfg.max_level || block.width() < 2 || block.height() < 2 {
            return Ok(PacketNode::Leaf(block));
        }
        let split = analyze2d(&block, f)?;
        let parent = cost(&block, cfg.threshold);
        let children: usize = split.clone().into_array().iter().map(|c| cost(c, cfg.threshold)).sum();
        // Ties keep the children: only a strictly larger child sum prunes.
        if children > parent {
            return Ok(PacketNode::Leaf(block));
        }
        let [a, h, v, d] = split.into_array();
        Ok(PacketNode::Split(Box::new([
            grow(a, depth + 1, f, cfg)?,
            grow(h, depth + 1, f, cfg)?,
            grow(v, depth + 1, f, cfg)?,
            grow(d, depth + 1, f, cfg)?,
        ])))
    }

    Ok(PacketTree {
        root: grow(p.clone(), 0, f, cfg)?,
        wavelet: f.id,
        width: p.width(),
        height: p.height(),
    })
}

/// Leaves of `t` in coding order: preorder, children A, H, V, D.
pub fn flatten_leaves(t: &PacketTree) -> Vec<(Vec<Subband>, &Plane)> {
    t.flatten()
}

/// Inverts the packet decomposition bottom-up.
pub fn reconstruct(t: &PacketTree, f: &FilterPair) -> Result<Plane> {
    if t.wavelet != f.id {
        return Err(Error::invalid(format!("tree built with {}, filters are {}", t.wavelet, f.id)));
    }
    fn walk(n: &PacketNode, w: usize, h: usize, f: &FilterPair) -> Result<Plane> {
        match n {
            PacketNode::Leaf(block) => {
                if block.dims() != (w, h) {
                    return Err(Error::CorruptTree(format!(
                        "leaf block is {}x{}, expected {w}x{h}",
                        block.width(),
                        block.height()
                    )));
                }
                Ok(block.clone())
            }
            PacketNode::Split(children) => {
                if w < 2 || h < 2 {
                    return Err(Error::CorruptTree(format!("split of an undecomposable {w}x{h} node")));
                }
                let (cw, ch) = (half(w), half(h));
                let q = QuadSplit {
                    a: walk(&children[0], cw, ch, f)?,
                    h: walk(&children[1], cw, ch, f)?,
                    v: walk(&children[2], cw, ch, f)?,
                    d: walk(&children[3], cw, ch, f)?,
                };
                synthesize2d(&q, f, w, h)
            }
        }
    }
    walk(&t.root, t.width, t.height, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavelet::get_filters;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use Subband::*;

    #[test]
    fn cost_examples() {
        let p = |v: Vec<f64>| Plane::new(v.len(), 1, v).unwrap();
        assert_eq!(cost(&Plane::zeros(3, 3), 1.0), 0);
        assert_eq!(cost(&p(vec![5.0, -3.0, 0.5, 2.0]), 2.0), 2);
        assert_eq!(cost(&p(vec![2.0, 2.0]), 2.0), 0);
        assert_eq!(cost_of(&[], 0.0), 0);
    }

    #[test]
    fn constant_plane_grows_full_tree() {
        // Root: 16 > 4 (children), A child: 4 > 1. The zero detail bands tie
        // at 0 == 0 and ties keep children, so every node splits to depth 2.
        let p = Plane::new(4, 4, vec![10.0; 16]).unwrap();
        let f = get_filters(WaveletId::Haar);
        let t = build_best_tree(&p, &f, &CostConfig::new(5.0, 2)).unwrap();
        assert_eq!(t.topology(), Topology::full(2));
        let leaves = t.flatten();
        assert_eq!(leaves.len(), 16);
        assert_eq!(leaves[0].0, vec![A, A]);
        assert!((leaves[0].1.values()[0] - 40.0).abs() < 1e-12);
        assert!(leaves[1..].iter().all(|(_, b)| b.values().iter().all(|v| v.abs() < 1e-12)));
    }

    #[test]
    fn huge_threshold_gives_full_tree() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = Plane::from_fn(16, 16, |_, _| rng.gen_range(-100.0..100.0)).unwrap();
        let t = build_best_tree(&p, &get_filters(WaveletId::Db2), &CostConfig::new(1e9, 3)).unwrap();
        assert_eq!(t.topology(), Topology::full(3));
    }

    #[test]
    fn detail_heavy_plane_stays_single_leaf() {
        // Subbands a = 0, h = v = d = 3 synthesize to pixels {4.5, -1.5, -1.5, -1.5}
        // per 2x2 cell: one pixel above 2.5 against three child coefficients.
        let f = get_filters(WaveletId::Haar);
        let (w, h) = (8, 8);
        let q = QuadSplit {
            a: Plane::zeros(4, 4),
            h: Plane::new(4, 4, vec![3.0; 16]).unwrap(),
            v: Plane::new(4, 4, vec![3.0; 16]).unwrap(),
            d: Plane::new(4, 4, vec![3.0; 16]).unwrap(),
        };
        let p = synthesize2d(&q, &f, w, h).unwrap();
        assert_eq!(cost(&p, 2.5), 16);
        let t = build_best_tree(&p, &f, &CostConfig::new(2.5, 2)).unwrap();
        assert_eq!(t.topology(), Topology::Leaf);
        assert_eq!(t.flatten(), vec![(vec![], &p)]);
    }

    #[test]
    fn flatten_order() {
        let z = || PacketNode::Leaf(Plane::zeros(1, 1));
        let t = PacketTree {
            root: PacketNode::Split(Box::new([z(), z(), z(), z()])),
            wavelet: WaveletId::Haar,
            width: 2,
            height: 2,
        };
        let paths: Vec<_> = t.flatten().into_iter().map(|(p, _)| p).collect();
        assert_eq!(paths, vec![vec![A], vec![H], vec![V], vec![D]]);

        let deep = Topology::split([Topology::full(1), Topology::Leaf, Topology::Leaf, Topology::Leaf]);
        let paths = deep.leaf_paths();
        let names: Vec<String> = paths.iter().map(|p| p.iter().map(|b| b.letter()).collect()).collect();
        assert_eq!(names, ["AA", "AH", "AV", "AD", "H", "V", "D"]);
        assert_eq!(deep.depth_histogram(), vec![0, 3, 4]);
    }

    #[test]
    fn reconstruct_examples() {
        let f = get_filters(WaveletId::Db2);
        let leaf = Plane::new(3, 2, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let single = PacketTree { root: PacketNode::Leaf(leaf.clone()), wavelet: f.id, width: 3, height: 2 };
        assert_eq!(reconstruct(&single, &f).unwrap(), leaf);

        let zeros = PacketTree::from_leaves(
            &Topology::full(2),
            f.id,
            8,
            8,
            (0..16).map(|_| Plane::zeros(2, 2)).collect(),
        )
        .unwrap();
        assert!(reconstruct(&zeros, &f).unwrap().values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn from_leaves_rejects_inconsistent_blocks() {
        let t = Topology::full(1);
        let bad = PacketTree::from_leaves(&t, WaveletId::Haar, 4, 4, vec![Plane::zeros(2, 2); 3]);
        assert!(matches!(bad, Err(Error::CorruptTree(_))));
        let bad = PacketTree::from_leaves(&t, WaveletId::Haar, 4, 4, vec![Plane::zeros(3, 2); 4]);
        assert!(matches!(bad, Err(Error::CorruptTree(_))));
        let tiny = PacketTree::from_leaves(&t, WaveletId::Haar, 1, 4, vec![Plane::zeros(1, 2); 4]);
        assert!(matches!(tiny, Err(Error::CorruptTree(_))));
    }

    #[test]
    fn rejects_bad_config() {
        let p = Plane::zeros(8, 8);
        let f = get_filters(WaveletId::Haar);
        assert!(build_best_tree(&p, &f, &CostConfig::new(1.0, 0)).is_err());
        assert!(build_best_tree(&p, &f, &CostConfig::new(1.0, 4)).is_err());
        assert!(build_best_tree(&p, &f, &CostConfig::new(-1.0, 2)).is_err());
        assert!(build_best_tree(&p, &f, &CostConfig::new(f64::NAN, 2)).is_err());
        assert_eq!(max_admissible_level(17, 64), 4);
    }

    #[test]
    fn small_odd_blocks_become_leaves() {
        // 3x3 at J=1 is admissible; 5x3 children at level 2 would be 2x1 at level 3.
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p = Plane::from_fn(9, 4, |_, _| rng.gen_range(-5.0..5.0)).unwrap();
        let f = get_filters(WaveletId::Haar);
        let t = build_best_tree(&p, &f, &CostConfig::new(1e6, 2)).unwrap();
        let dims = t.topology().leaf_dims(9, 4).unwrap();
        assert!(dims.iter().all(|&(w, h)| w >= 1 && h >= 1));
        assert!(reconstruct(&t, &f).unwrap().max_abs_diff(&p).unwrap() < 1e-9);
    }

    fn arb_case() -> impl Strategy<Value = (usize, usize, u64, f64, u8, usize)> {
        (2usize..40, 2usize..40, any::<u64>(), 0.0f64..50.0, 1u8..4, 0usize..4)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn built_trees_satisfy_invariants((w, h, seed, thr, j, wid) in arb_case()) {
            let j = j.min(max_admissible_level(w, h) as u8).max(1);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = Plane::from_fn(w, h, |_, _| rng.gen_range(-60.0..60.0)).unwrap();
            let f = get_filters(WaveletId::ALL[wid]);
            let cfg = CostConfig::new(thr, j);
            let t = build_best_tree(&p, &f, &cfg).unwrap();

            // leaf cost bound
            let leaf_cost: usize = t.flatten().iter().map(|(_, b)| cost(b, thr)).sum();
            prop_assert!(leaf_cost <= cost(&p, thr));

            // tiling: leaf dims follow the topology and depth stays within J
            let topo = t.topology();
            let dims = topo.leaf_dims(w, h).unwrap();
            let got: Vec<_> = t.flatten().iter().map(|(_, b)| b.dims()).collect();
            prop_assert_eq!(dims, got);
            prop_assert!(topo.depth() <= j as usize);

            // perfect reconstruction without quantization
            prop_assert!(reconstruct(&t, &f).unwrap().max_abs_diff(&p).unwrap() <= 1e-8);

            // determinism
            prop_assert_eq!(build_best_tree(&p, &f, &cfg).unwrap(), t);
        }
    }
}
