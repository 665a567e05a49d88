use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};

use crate::bits::{BitReader, BitWriter, ByteReader};
use crate::error::{Error, Result};

pub const MAX_CODE_LEN: u8 = 32;

/// Canonical prefix code over signed 32-bit symbols.
///
/// Codes are assigned in `(length, symbol)` order, so the table is fully
/// described by its `(symbol, length)` list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HuffmanTable {
    /// Sorted by `(length, symbol)`.
    entries: Vec<(i32, u8)>,
    codes: HashMap<i32, (u64, u8)>,
    /// Per length: number of codes and the first canonical code.
    count: [u32; MAX_CODE_LEN as usize + 1],
    first: [u64; MAX_CODE_LEN as usize + 1],
}

impl HuffmanTable {
    /// Builds the canonical table from `(symbol, length)` pairs in any order.
    pub fn from_lengths(mut entries: Vec<(i32, u8)>) -> Result<Self> {
        entries.sort_unstable_by_key(|&(s, l)| (l, s));
        let mut count = [0u32; MAX_CODE_LEN as usize + 1];
        let mut kraft: u64 = 0;
        for &(_, len) in &entries {
            if len == 0 || len > MAX_CODE_LEN {
                return Err(Error::invalid(format!("code length {len} outside 1..={MAX_CODE_LEN}")));
            }
            count[len as usize] += 1;
            kraft += 1u64 << (MAX_CODE_LEN - len);
        }
        if kraft > 1u64 << MAX_CODE_LEN {
            return Err(Error::invalid("code lengths violate the Kraft inequality"));
        }
        let mut symbols: Vec<i32> = entries.iter().map(|&(s, _)| s).collect();
        symbols.sort_unstable();
        if symbols.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid("duplicate symbol in code table"));
        }

        let mut first = [0u64; MAX_CODE_LEN as usize + 1];
        let mut code = 0u64;
        for len in 1..=MAX_CODE_LEN as usize {
            code = (code + u64::from(count[len - 1])) << 1;
            first[len] = code;
        }
        let mut next = first;
        let codes = entries
            .iter()
            .map(|&(s, l)| {
                let c = next[l as usize];
                next[l as usize] += 1;
                (s, (c, l))
            })
            .collect();
        Ok(HuffmanTable { entries, codes, count, first })
    }

    pub fn empty() -> Self {
        HuffmanTable::from_lengths(Vec::new()).expect("empty table is valid")
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Symbols in ascending order.
    pub fn alphabet(&self) -> Vec<i32> {
        let mut a: Vec<i32> = self.entries.iter().map(|&(s, _)| s).collect();
        a.sort_unstable();
        a
    }

    /// `(symbol, length)` in canonical order.
    pub fn entries(&self) -> &[(i32, u8)] {
        &self.entries
    }

    pub fn code_length(&self, symbol: i32) -> Option<u8> {
        self.codes.get(&symbol).map(|&(_, l)| l)
    }

    pub fn code(&self, symbol: i32) -> Option<(u64, u8)> {
        self.codes.get(&symbol).copied()
    }

    /// `sum 2^-len`, exact for lengths up to 32.
    pub fn kraft_sum(&self) -> f64 {
        self.entries.iter().map(|&(_, l)| 0.5f64.powi(i32::from(l))).sum()
    }

    /// Wire form: entry count (u32), then `(symbol: i32, length: u8)` pairs in
    /// canonical order, all big-endian.
    pub fn write_to(&self, out: &mut Vec<u8>) {
        out.extend_from_slice(&(self.entries.len() as u32).to_be_bytes());
        for &(s, l) in &self.entries {
            out.extend_from_slice(&s.to_be_bytes());
            out.push(l);
        }
    }

    pub fn read_from(r: &mut ByteReader<'_>) -> Result<Self> {
        let n = r.u32()? as usize;
        if n.checked_mul(5).is_none_or(|b| b > r.remaining().len()) {
            return Err(Error::Truncated);
        }
        let mut entries = Vec::with_capacity(n);
        for _ in 0..n {
            let s = r.i32()?;
            let l = r.u8()?;
            if let Some(&(ps, pl)) = entries.last() {
                if (pl, ps) >= (l, s) {
                    return Err(Error::corrupt("code table not in canonical order"));
                }
            }
            entries.push((s, l));
        }
        HuffmanTable::from_lengths(entries).map_err(|e| Error::corrupt(format!("code table: {e}")))
    }

    fn decode_one(&self, r: &mut BitReader<'_>) -> Result<i32> {
        let mut code = 0u64;
        let mut offset = 0usize;
        for len in 1..=MAX_CODE_LEN as usize {
            let bit = r.read_bit().ok_or(Error::CorruptData("bit stream ended early"))?;
            code = (code << 1) | u64::from(bit);
            let n = u64::from(self.count[len]);
            if code >= self.first[len] && code - self.first[len] < n {
                return Ok(self.entries[offset + (code - self.first[len]) as usize].0);
            }
            offset += n as usize;
        }
        Err(Error::CorruptData("invalid prefix code"))
    }
}

/// Optimal code lengths for the positive counts in `freqs`, in canonical form.
///
/// Merges always take the two lightest nodes, ordered by `(count, smallest
/// symbol in the subtree)`, so the result is deterministic. A lone symbol gets
/// length 1. Lengths over [`MAX_CODE_LEN`] are clamped and the Kraft sum is
/// repaired by lengthening the longest codes still below the cap.
pub fn huffman_build(freqs: &BTreeMap<i32, u64>) -> Result<HuffmanTable> {
    let symbols: Vec<(i32, u64)> = freqs.iter().filter(|(_, &c)| c > 0).map(|(&s, &c)| (s, c)).collect();
    match symbols.len() {
        0 => return Err(Error::invalid("cannot build a code for an empty alphabet")),
        1 => return HuffmanTable::from_lengths(vec![(symbols[0].0, 1)]),
        _ => {}
    }

    // parent links over leaves 0..n then internal nodes
    let n = symbols.len();
    let mut parent = vec![usize::MAX; 2 * n - 1];
    let mut heap: BinaryHeap<Reverse<(u64, i32, usize)>> =
        symbols.iter().enumerate().map(|(i, &(s, c))| Reverse((c, s, i))).collect();
    let mut next = n;
    while heap.len() > 1 {
        let Reverse((c1, s1, i1)) = heap.pop().expect("heap has two nodes");
        let Reverse((c2, s2, i2)) = heap.pop().expect("heap has two nodes");
        parent[i1] = next;
        parent[i2] = next;
        heap.push(Reverse((c1.saturating_add(c2), s1.min(s2), next)));
        next += 1;
    }
    let root = next - 1;
    let mut depth = vec![0u32; 2 * n - 1];
    for i in (0..root).rev() {
        depth[i] = depth[parent[i]] + 1;
    }
    let mut lengths: Vec<(i32, u32)> = symbols.iter().enumerate().map(|(i, &(s, _))| (s, depth[i])).collect();
    limit_lengths(&mut lengths);
    HuffmanTable::from_lengths(lengths.into_iter().map(|(s, l)| (s, l as u8)).collect())
}

fn limit_lengths(lengths: &mut [(i32, u32)]) {
    let cap = u32::from(MAX_CODE_LEN);
    if lengths.iter().all(|&(_, l)| l <= cap) {
        return;
    }
    for (_, l) in lengths.iter_mut() {
        *l = (*l).min(cap);
    }
    let budget = 1u64 << cap;
    let mut kraft: u64 = lengths.iter().map(|&(_, l)| 1u64 << (cap - l)).sum();
    while kraft > budget {
        let (_, l) = lengths
            .iter_mut()
            .filter(|(_, l)| *l < cap)
            .max_by_key(|(s, l)| (*l, *s))
            .expect("a code shorter than the cap exists while the Kraft sum overflows");
        kraft -= 1u64 << (cap - *l - 1);
        *l += 1;
    }
}

pub fn huffman_encode(seq: &[i32], table: &HuffmanTable, w: &mut BitWriter) -> Result<()> {
    for &s in seq {
        let (code, len) = table
            .code(s)
            .ok_or_else(|| Error::invalid(format!("symbol {s} missing from code table")))?;
        w.write_bits(code, len);
    }
    Ok(())
}

/// Decodes exactly `count` symbols.
pub fn huffman_decode(r: &mut BitReader<'_>, table: &HuffmanTable, count: usize) -> Result<Vec<i32>> {
    if count > 0 && table.is_empty() {
        return Err(Error::CorruptData("symbols requested from an empty code table"));
    }
    // every code is at least one bit long
    let mut out = Vec::with_capacity(count.min(r.bits_remaining()));
    for _ in 0..count {
        out.push(table.decode_one(r)?);
    }
    Ok(out)
}
