use crate::error::{Error, Result};

/// One run: `run` copies of `value`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Run {
    pub value: i32,
    pub run: u32,
}

/// Lossy run extension with tolerance `delta`.
///
/// A representative starts at the first symbol. Each following symbol within
/// `delta` of it is replaced by the representative; any other symbol is kept
/// and becomes the new representative.
pub fn rle_smooth(seq: &[i32], delta: u32) -> Vec<i32> {
    let Some(&first) = seq.first() else {
        return Vec::new();
    };
    let mut rep = first;
    seq.iter()
        .map(|&x| {
            if (i64::from(x) - i64::from(rep)).unsigned_abs() > u64::from(delta) {
                rep = x;
            }
            rep
        })
        .collect()
}

/// Maximal runs of identical values.
pub fn rle_encode(seq: &[i32]) -> Vec<Run> {
    let mut out: Vec<Run> = Vec::new();
    for &v in seq {
        match out.last_mut() {
            Some(last) if last.value == v && last.run < u32::MAX => last.run += 1,
            _ => out.push(Run { value: v, run: 1 }),
        }
    }
    out
}

pub fn rle_decode(pairs: &[Run]) -> Result<Vec<i32>> {
    let mut total = 0usize;
    for p in pairs {
        if p.run == 0 {
            return Err(Error::CorruptData("zero-length run"));
        }
        total = total.checked_add(p.run as usize).ok_or(Error::CorruptData("run total overflows"))?;
    }
    let mut out = Vec::with_capacity(total);
    for p in pairs {
        out.extend(std::iter::repeat_n(p.value, p.run as usize));
    }
    Ok(out)
}
