//! Mother-wavelet filter banks and one level of separable 2D analysis/synthesis.
//!
//! Filters are stored in correlation form: the low-pass output at index `k`
//! is `sum_j lo[j] * x[2k + j]`, so Haar gives `(x[2k] + x[2k+1]) / sqrt(2)`.
//! Synthesis is the transposed operator built from the synthesis taps.
//!
//! Each axis is transformed as a periodic signal of even length. An axis of odd
//! length `n` is first extended to `n + 1` by mirroring its last sample
//! (half-sample symmetric extension), so every subband has `ceil(n / 2)`
//! samples and the inverse drops the extra sample again.

use std::f64::consts::SQRT_2;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::pixmap::Plane;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WaveletId {
    Haar,
    Db2,
    Db4,
    Bior2_2,
}

impl WaveletId {
    pub const ALL: [WaveletId; 4] = [WaveletId::Haar, WaveletId::Db2, WaveletId::Db4, WaveletId::Bior2_2];

    /// Container byte: haar=0, db2=1, db4=2, bior2_2=3.
    pub fn to_byte(self) -> u8 {
        match self {
            WaveletId::Haar => 0,
            WaveletId::Db2 => 1,
            WaveletId::Db4 => 2,
            WaveletId::Bior2_2 => 3,
        }
    }

    pub fn from_byte(b: u8) -> Result<Self> {
        WaveletId::ALL
            .get(b as usize)
            .copied()
            .ok_or_else(|| Error::UnsupportedWavelet(format!("id {b}")))
    }

    pub fn name(self) -> &'static str {
        match self {
            WaveletId::Haar => "haar",
            WaveletId::Db2 => "db2",
            WaveletId::Db4 => "db4",
            WaveletId::Bior2_2 => "bior2_2",
        }
    }

    pub fn is_orthogonal(self) -> bool {
        !matches!(self, WaveletId::Bior2_2)
    }
}

impl fmt::Display for WaveletId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WaveletId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "haar" | "db1" => Ok(WaveletId::Haar),
            "db2" => Ok(WaveletId::Db2),
            "db4" => Ok(WaveletId::Db4),
            "bior2_2" | "bior2.2" => Ok(WaveletId::Bior2_2),
            _ => Err(Error::UnsupportedWavelet(s.to_string())),
        }
    }
}

/// Analysis and synthesis taps of one two-channel filter bank.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterPair {
    pub id: WaveletId,
    pub analysis_lo: Vec<f64>,
    pub analysis_hi: Vec<f64>,
    pub synthesis_lo: Vec<f64>,
    pub synthesis_hi: Vec<f64>,
}

const DB2_LO: [f64; 4] = [
    0.482_962_913_144_690_25,
    0.836_516_303_737_469,
    0.224_143_868_041_857_35,
    -0.129_409_522_550_921_45,
];

const DB4_LO: [f64; 8] = [
    0.230_377_813_308_855_23,
    0.714_846_570_552_541_5,
    0.630_880_767_929_590_4,
    -0.027_983_769_416_983_85,
    -0.187_034_811_718_881_14,
    0.030_841_381_835_986_965,
    0.032_883_011_666_982_945,
    -0.010_597_401_784_997_278,
];

/// Quadrature mirror: `hi[n] = (-1)^n lo[L-1-n]`.
fn mirror(lo: &[f64]) -> Vec<f64> {
    let l = lo.len();
    (0..l)
        .map(|n| if n % 2 == 0 { lo[l - 1 - n] } else { -lo[l - 1 - n] })
        .collect()
}

fn orthogonal(id: WaveletId, lo: &[f64]) -> FilterPair {
    let hi = mirror(lo);
    FilterPair {
        id,
        analysis_lo: lo.to_vec(),
        analysis_hi: hi.clone(),
        synthesis_lo: lo.to_vec(),
        synthesis_hi: hi,
    }
}

fn bior2_2() -> FilterPair {
    let (e, q, h) = (SQRT_2 / 8.0, SQRT_2 / 4.0, SQRT_2 / 2.0);
    FilterPair {
        id: WaveletId::Bior2_2,
        analysis_lo: vec![-e, q, 3.0 * q, q, -e, 0.0],
        analysis_hi: vec![0.0, 0.0, q, -h, q, 0.0],
        synthesis_lo: vec![0.0, q, h, q, 0.0, 0.0],
        synthesis_hi: vec![0.0, e, q, -3.0 * q, q, e],
    }
}

/// Registered taps for `id`.
pub fn get_filters(id: WaveletId) -> FilterPair {
    match id {
        WaveletId::Haar => orthogonal(id, &[SQRT_2 / 2.0, SQRT_2 / 2.0]),
        WaveletId::Db2 => orthogonal(id, &DB2_LO),
        WaveletId::Db4 => orthogonal(id, &DB4_LO),
        WaveletId::Bior2_2 => bior2_2(),
    }
}

/// Looks a wavelet up by name, e.g. `"db2"`.
pub fn filters_by_name(name: &str) -> Result<FilterPair> {
    name.parse().map(get_filters)
}

/// Subband of one quad split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subband {
    /// low-pass along both axes
    A,
    /// low-pass along x, high-pass along y
    H,
    /// high-pass along x, low-pass along y
    V,
    /// high-pass along both axes
    D,
}

impl Subband {
    pub const ORDER: [Subband; 4] = [Subband::A, Subband::H, Subband::V, Subband::D];

    pub fn letter(self) -> char {
        match self {
            Subband::A => 'A',
            Subband::H => 'H',
            Subband::V => 'V',
            Subband::D => 'D',
        }
    }
}

/// The four subbands of one decomposition level.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadSplit {
    pub a: Plane,
    pub h: Plane,
    pub v: Plane,
    pub d: Plane,
}

impl QuadSplit {
    pub fn from_array([a, h, v, d]: [Plane; 4]) -> Self {
        QuadSplit { a, h, v, d }
    }

    pub fn into_array(self) -> [Plane; 4] {
        [self.a, self.h, self.v, self.d]
    }

    pub fn get(&self, band: Subband) -> &Plane {
        match band {
            Subband::A => &self.a,
            Subband::H => &self.h,
            Subband::V => &self.v,
            Subband::D => &self.d,
        }
    }
}

/// Subband size along an axis of length `n`.
pub fn half(n: usize) -> usize {
    n.div_ceil(2)
}

/// One-dimensional periodized analysis of `x` into `lo` and `hi`
/// (each `half(x.len())` long).
fn analyze_line(x: &[f64], f: &FilterPair, ext: &mut Vec<f64>, lo: &mut [f64], hi: &mut [f64]) {
    ext.clear();
    ext.extend_from_slice(x);
    if x.len() % 2 == 1 {
        ext.push(x[x.len() - 1]);
    }
    let m = ext.len();
    for k in 0..m / 2 {
        let (mut sl, mut sh) = (0.0, 0.0);
        for (j, (&tl, &th)) in f.analysis_lo.iter().zip(&f.analysis_hi).enumerate() {
            let s = ext[(2 * k + j) % m];
            sl += tl * s;
            sh += th * s;
        }
        lo[k] = sl;
        hi[k] = sh;
    }
}

/// Inverse of [`analyze_line`]; writes `out.len()` samples.
fn synthesize_line(lo: &[f64], hi: &[f64], f: &FilterPair, ext: &mut Vec<f64>, out: &mut [f64]) {
    let m = 2 * lo.len();
    ext.clear();
    ext.resize(m, 0.0);
    for k in 0..lo.len() {
        let (cl, ch) = (lo[k], hi[k]);
        for (j, (&tl, &th)) in f.synthesis_lo.iter().zip(&f.synthesis_hi).enumerate() {
            ext[(2 * k + j) % m] += tl * cl + th * ch;
        }
    }
    out.copy_from_slice(&ext[..out.len()]);
}

/// One level of separable 2D analysis: rows first, then columns.
pub fn analyze2d(p: &Plane, f: &FilterPair) -> Result<QuadSplit> {
    let (w, h) = p.dims();
    if w < 2 || h < 2 {
        return Err(Error::invalid(format!("cannot decompose a {w}x{h} plane")));
    }
    let (hw, hh) = (half(w), half(h));
    let mut ext = Vec::with_capacity(w.max(h) + 1);

    // Row pass: left half low-pass, right half high-pass.
    let mut rows_lo = vec![0.0; hw * h];
    let mut rows_hi = vec![0.0; hw * h];
    for (y, row) in p.values().chunks_exact(w).enumerate() {
        let r = y * hw..(y + 1) * hw;
        analyze_line(row, f, &mut ext, &mut rows_lo[r.clone()], &mut rows_hi[r]);
    }

    let mut col = vec![0.0; h];
    let (mut clo, mut chi) = (vec![0.0; hh], vec![0.0; hh]);
    let mut column_pass = |src: &[f64], lo_out: &mut [f64], hi_out: &mut [f64]| {
        for x in 0..hw {
            for y in 0..h {
                col[y] = src[y * hw + x];
            }
            analyze_line(&col, f, &mut ext, &mut clo, &mut chi);
            for y in 0..hh {
                lo_out[y * hw + x] = clo[y];
                hi_out[y * hw + x] = chi[y];
            }
        }
    };
    let n = hw * hh;
    let (mut a, mut hd, mut vd, mut d) = (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    column_pass(&rows_lo, &mut a, &mut hd);
    column_pass(&rows_hi, &mut vd, &mut d);

    Ok(QuadSplit {
        a: Plane::from_raw(hw, hh, a),
        h: Plane::from_raw(hw, hh, hd),
        v: Plane::from_raw(hw, hh, vd),
        d: Plane::from_raw(hw, hh, d),
    })
}

/// Inverse of [`analyze2d`] producing a `width x height` plane.
pub fn synthesize2d(q: &QuadSplit, f: &FilterPair, width: usize, height: usize) -> Result<Plane> {
    let (hw, hh) = (half(width), half(height));
    for band in Subband::ORDER {
        if q.get(band).dims() != (hw, hh) {
            return Err(Error::DimensionMismatch(format!(
                "subband {} is {}x{}, expected {hw}x{hh} for a {width}x{height} target",
                band.letter(),
                q.get(band).width(),
                q.get(band).height()
            )));
        }
    }
    if width < 2 || height < 2 {
        return Err(Error::invalid(format!("cannot synthesize a {width}x{height} plane")));
    }
    let mut ext = Vec::with_capacity(width.max(height) + 1);

    let mut rows_lo = vec![0.0; hw * height];
    let mut rows_hi = vec![0.0; hw * height];
    let (mut clo, mut chi) = (vec![0.0; hh], vec![0.0; hh]);
    let mut col = vec![0.0; height];
    let mut column_pass = |lo_src: &[f64], hi_src: &[f64], out: &mut [f64]| {
        for x in 0..hw {
            for y in 0..hh {
                clo[y] = lo_src[y * hw + x];
                chi[y] = hi_src[y * hw + x];
            }
            synthesize_line(&clo, &chi, f, &mut ext, &mut col);
            for y in 0..height {
                out[y * hw + x] = col[y];
            }
        }
    };
    column_pass(q.a.values(), q.h.values(), &mut rows_lo);
    column_pass(q.v.values(), q.d.values(), &mut rows_hi);

    let mut ext = Vec::with_capacity(width + 1);
    let mut out = vec![0.0; width * height];
    for y in 0..height {
        let r = y * hw..(y + 1) * hw;
        synthesize_line(&rows_lo[r.clone()], &rows_hi[r], f, &mut ext, &mut out[y * width..(y + 1) * width]);
    }
    Ok(Plane::from_raw(width, height, out))
}
