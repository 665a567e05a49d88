//! The coding stage on its own: run smoothing, run-length pairs and two
//! canonical Huffman tables.

use std::collections::BTreeMap;

use wpb_codec::bits::{BitReader, BitWriter};
use wpb_codec::entropy::{huffman_build, huffman_decode, huffman_encode, rle_decode, rle_encode, rle_smooth};

fn histogram(symbols: impl Iterator<Item = i32>) -> BTreeMap<i32, u64> {
    let mut m = BTreeMap::new();
    symbols.for_each(|s| *m.entry(s).or_insert(0) += 1);
    m
}

fn main() {
    // a quantized-looking band: long zero runs with small bursts
    let seq: Vec<i32> = (0..512)
        .map(|i: i32| match i % 64 {
            0..=40 => 0,
            41..=44 => 3 + (i / 64) % 2,
            45..=50 => -1,
            _ => (i % 3) - 1,
        })
        .collect();

    for delta in [0, 1, 2] {
        let smoothed = rle_smooth(&seq, delta);
        let pairs = rle_encode(&smoothed);
        let values = huffman_build(&histogram(pairs.iter().map(|p| p.value))).unwrap();
        let runs = huffman_build(&histogram(pairs.iter().map(|p| p.run as i32))).unwrap();

        let mut w = BitWriter::new();
        huffman_encode(&pairs.iter().map(|p| p.value).collect::<Vec<_>>(), &values, &mut w).unwrap();
        huffman_encode(&pairs.iter().map(|p| p.run as i32).collect::<Vec<_>>(), &runs, &mut w).unwrap();
        let bits = w.bit_len();
        let bytes = w.finish();

        let mut r = BitReader::new(&bytes);
        let v = huffman_decode(&mut r, &values, pairs.len()).unwrap();
        let n = huffman_decode(&mut r, &runs, pairs.len()).unwrap();
        let decoded: Vec<_> = v
            .into_iter()
            .zip(n)
            .map(|(value, run)| wpb_codec::entropy::Run { value, run: run as u32 })
            .collect();
        let back = rle_decode(&decoded).unwrap();
        let max_err = back.iter().zip(&seq).map(|(a, b)| (a - b).abs()).max().unwrap_or(0);

        println!(
            "delta={delta}: {} pairs, value codes {:?}, {bits} payload bits, max error {max_err}",
            pairs.len(),
            values.entries()
        );
    }
}
