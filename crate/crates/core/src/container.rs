//! The `WPB1` compressed file format.
//!
//! All integers are big-endian. Layout:
//!
//! ```text
//! header   magic "WPB1" | version u8 = 1 | colorspace u8 (0 gray, 1 YUV)
//!          | width u16 | height u16 | wavelet u8 | max_level u8 | plane_count u8
//! plane*   hard_threshold f32 | quant_step f32 | rle_delta u32
//!          | topology bits, preorder, 1 = internal, 0 = leaf
//!          | one scan bit per leaf in coding order (0 row-major, 1 column-major),
//!            zero-padded to a byte together with the topology bits
//!          | value table | run table | pair_count u32
//!          | payload: pair_count value codes, then pair_count run codes, zero-padded
//! table    entry count u32 | (symbol i32, length u8)* sorted by (length, symbol)
//! ```
//!
//! Run lengths are coded as the symbol `run as i32` (bit-for-bit), so runs up
//! to `u32::MAX` fit the signed alphabet.

use crate::bits::{BitReader, BitWriter, ByteReader};
use crate::entropy::{huffman_decode, HuffmanTable, Run};
use crate::error::{Error, Result};
use crate::packet::{max_admissible_level, Topology};
use crate::wavelet::WaveletId;

pub const MAGIC: [u8; 4] = *b"WPB1";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 13;

/// Order in which a leaf block's coefficients enter the symbol stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScanOrder {
    #[default]
    RowMajor,
    ColumnMajor,
}

impl ScanOrder {
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            ScanOrder::ColumnMajor
        } else {
            ScanOrder::RowMajor
        }
    }

    pub fn bit(self) -> bool {
        self == ScanOrder::ColumnMajor
    }

    /// Row-major positions of a `width x height` block in scan order.
    pub fn positions(self, width: usize, height: usize) -> Vec<usize> {
        match self {
            ScanOrder::RowMajor => (0..width * height).collect(),
            ScanOrder::ColumnMajor => (0..width).flat_map(|x| (0..height).map(move |y| y * width + x)).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColorSpace {
    Gray,
    Yuv,
}

impl ColorSpace {
    pub fn plane_count(self) -> u8 {
        match self {
            ColorSpace::Gray => 1,
            ColorSpace::Yuv => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ColorSpace::Gray => "gray",
            ColorSpace::Yuv => "yuv",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContainerHeader {
    pub colorspace: ColorSpace,
    pub width: u16,
    pub height: u16,
    pub wavelet: WaveletId,
    pub max_level: u8,
    pub plane_count: u8,
}

impl ContainerHeader {
    pub fn validate(&self) -> Result<()> {
        if self.plane_count != self.colorspace.plane_count() {
            return Err(Error::corrupt(format!(
                "{} container with {} planes",
                self.colorspace.name(),
                self.plane_count
            )));
        }
        if self.width < 2 || self.height < 2 {
            return Err(Error::corrupt(format!("image size {}x{} below 2x2", self.width, self.height)));
        }
        let limit = max_admissible_level(self.width.into(), self.height.into());
        if self.max_level < 1 || u32::from(self.max_level) > limit {
            return Err(Error::corrupt(format!("max level {} outside 1..={limit}", self.max_level)));
        }
        Ok(())
    }
}

/// Coded data of one plane.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneRecord {
    pub hard_threshold: f32,
    pub quant_step: f32,
    pub rle_delta: u32,
    pub topology: Topology,
    /// One entry per leaf, coding order.
    pub scan: Vec<ScanOrder>,
    pub value_table: HuffmanTable,
    pub run_table: HuffmanTable,
    pub pair_count: u32,
    pub payload: Vec<u8>,
}

impl PlaneRecord {
    /// Decodes the payload back into run pairs.
    pub fn pairs(&self) -> Result<Vec<Run>> {
        let mut r = BitReader::new(&self.payload);
        let pairs = decode_pairs(&mut r, self)?;
        r.align()?;
        if r.bits_remaining() != 0 {
            return Err(Error::corrupt("trailing payload bytes"));
        }
        Ok(pairs)
    }
}

fn decode_pairs(r: &mut BitReader<'_>, rec: &PlaneRecord) -> Result<Vec<Run>> {
    let n = rec.pair_count as usize;
    let values = huffman_decode(r, &rec.value_table, n)?;
    let runs = huffman_decode(r, &rec.run_table, n)?;
    values
        .into_iter()
        .zip(runs)
        .map(|(value, run)| match run as u32 {
            0 => Err(Error::CorruptData("zero-length run")),
            run => Ok(Run { value, run }),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Container {
    pub header: ContainerHeader,
    pub planes: Vec<PlaneRecord>,
}

/// Preorder bits of a tree shape: `1` per internal node, `0` per leaf.
pub fn serialize_topology(t: &Topology) -> Vec<bool> {
    t.to_bits()
}

/// Reads one complete preorder walk. Nodes deeper than `max_depth` are rejected.
pub fn read_topology(r: &mut BitReader<'_>, max_depth: usize) -> Result<Topology> {
    fn walk(r: &mut BitReader<'_>, depth: usize, max_depth: usize) -> Result<Topology> {
        match r.read_bit() {
            None => Err(Error::corrupt("topology ended before the tree was complete")),
            Some(false) => Ok(Topology::Leaf),
            Some(true) if depth >= max_depth => Err(Error::corrupt("topology deeper than the maximum level")),
            Some(true) => Ok(Topology::split([
                walk(r, depth + 1, max_depth)?,
                walk(r, depth + 1, max_depth)?,
                walk(r, depth + 1, max_depth)?,
                walk(r, depth + 1, max_depth)?,
            ])),
        }
    }
    walk(r, 0, max_depth)
}

/// Inverse of [`serialize_topology`]; every bit must belong to the walk.
pub fn deserialize_topology(bits: &[bool], max_depth: usize) -> Result<Topology> {
    let mut w = BitWriter::new();
    bits.iter().for_each(|&b| w.write_bit(b));
    let bytes = w.finish();
    let mut r = BitReader::new(&bytes);
    let t = read_topology(&mut r, max_depth)?;
    if r.bits_read() != bits.len() {
        return Err(Error::corrupt("trailing bits after topology"));
    }
    Ok(t)
}

pub fn write_container(header: &ContainerHeader, planes: &[PlaneRecord]) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(&MAGIC);
    out.push(VERSION);
    out.push(match header.colorspace {
        ColorSpace::Gray => 0,
        ColorSpace::Yuv => 1,
    });
    out.extend_from_slice(&header.width.to_be_bytes());
    out.extend_from_slice(&header.height.to_be_bytes());
    out.push(header.wavelet.to_byte());
    out.push(header.max_level);
    out.push(header.plane_count);
    for p in planes {
        out.extend_from_slice(&p.hard_threshold.to_be_bytes());
        out.extend_from_slice(&p.quant_step.to_be_bytes());
        out.extend_from_slice(&p.rle_delta.to_be_bytes());
        let mut w = BitWriter::new();
        serialize_topology(&p.topology).into_iter().for_each(|b| w.write_bit(b));
        p.scan.iter().for_each(|s| w.write_bit(s.bit()));
        out.extend_from_slice(&w.finish());
        p.value_table.write_to(&mut out);
        p.run_table.write_to(&mut out);
        out.extend_from_slice(&p.pair_count.to_be_bytes());
        out.extend_from_slice(&p.payload);
    }
    out
}

fn read_header(r: &mut ByteReader<'_>) -> Result<ContainerHeader> {
    let magic = r.take(4)?;
    if magic != MAGIC {
        return Err(Error::BadMagic);
    }
    let version = r.u8()?;
    if version != VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    let colorspace = match r.u8()? {
        0 => ColorSpace::Gray,
        1 => ColorSpace::Yuv,
        other => return Err(Error::corrupt(format!("unknown colorspace {other}"))),
    };
    let header = ContainerHeader {
        colorspace,
        width: r.u16()?,
        height: r.u16()?,
        wavelet: WaveletId::from_byte(r.u8()?)?,
        max_level: r.u8()?,
        plane_count: r.u8()?,
    };
    header.validate()?;
    Ok(header)
}

fn read_plane(r: &mut ByteReader<'_>, header: &ContainerHeader) -> Result<PlaneRecord> {
    let hard_threshold = r.f32()?;
    let quant_step = r.f32()?;
    if !(hard_threshold >= 0.0 && hard_threshold.is_finite()) {
        return Err(Error::corrupt(format!("hard threshold {hard_threshold}")));
    }
    if !(quant_step > 0.0 && quant_step.is_finite()) {
        return Err(Error::corrupt(format!("quantizer step {quant_step}")));
    }
    let rle_delta = r.u32()?;

    let mut bits = BitReader::new(r.remaining());
    let topology = read_topology(&mut bits, header.max_level.into()).map_err(|e| match e {
        Error::CorruptContainer(_) if bits.bits_remaining() == 0 => Error::Truncated,
        e => e,
    })?;
    let scan = (0..topology.leaf_count())
        .map(|_| bits.read_bit().map(ScanOrder::from_bit).ok_or(Error::Truncated))
        .collect::<Result<Vec<_>>>()?;
    bits.align()?;
    r.advance(bits.bytes_consumed())?;
    let coefficients: usize = topology
        .leaf_dims(header.width.into(), header.height.into())
        .map_err(|e| Error::corrupt(e.to_string()))?
        .iter()
        .map(|&(w, h)| w * h)
        .sum();

    let value_table = HuffmanTable::read_from(r)?;
    let run_table = HuffmanTable::read_from(r)?;
    let pair_count = r.u32()?;
    let mut rec = PlaneRecord {
        hard_threshold,
        quant_step,
        rle_delta,
        topology,
        scan,
        value_table,
        run_table,
        pair_count,
        payload: Vec::new(),
    };

    let mut bits = BitReader::new(r.remaining());
    let pairs = decode_pairs(&mut bits, &rec).map_err(|e| match e {
        Error::CorruptData("bit stream ended early") => Error::Truncated,
        Error::CorruptData(msg) => Error::corrupt(msg),
        e => e,
    })?;
    bits.align()?;
    let total = pairs.iter().try_fold(0usize, |acc, p| acc.checked_add(p.run as usize));
    if total != Some(coefficients) {
        return Err(Error::corrupt(format!("runs cover {total:?} coefficients, tree holds {coefficients}")));
    }
    rec.payload = r.take(bits.bytes_consumed())?.to_vec();
    Ok(rec)
}

pub fn read_container(bytes: &[u8]) -> Result<Container> {
    let mut r = ByteReader::new(bytes);
    let header = read_header(&mut r)?;
    let planes = (0..header.plane_count)
        .map(|_| read_plane(&mut r, &header))
        .collect::<Result<Vec<_>>>()?;
    if !r.remaining().is_empty() {
        return Err(Error::corrupt(format!("{} trailing bytes", r.remaining().len())));
    }
    Ok(Container { header, planes })
}

impl Container {
    pub fn to_bytes(&self) -> Vec<u8> {
        write_container(&self.header, &self.planes)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        read_container(bytes)
    }
}
