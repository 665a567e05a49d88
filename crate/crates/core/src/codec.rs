//! End-to-end encoder/decoder and the quality/size metrics.

use std::collections::BTreeMap;

use crate::bits::BitWriter;
use crate::container::{
    read_container, write_container, ColorSpace, Container, ContainerHeader, PlaneRecord, ScanOrder,
};
use crate::entropy::{huffman_build, huffman_encode, rle_decode, rle_encode, rle_smooth, HuffmanTable, Run};
use crate::error::{Error, Result};
use crate::packet::{build_best_tree, reconstruct, CostConfig, PacketTree, Topology};
use crate::pixmap::{image_to_planes, planes_to_image, Image, Plane, PlaneSet};
use crate::quant::{dequantize, hard_threshold, quantize, QuantConfig};
use crate::wavelet::{get_filters, Subband, WaveletId};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodecConfig {
    pub wavelet: WaveletId,
    pub max_level: u8,
    /// Threshold of the best-tree cost count.
    pub cost_threshold: f64,
    pub luma: QuantConfig,
    pub chroma: QuantConfig,
    /// Smoothing tolerance in quantizer steps; `0` keeps coding lossless.
    pub rle_delta: u32,
}

impl Default for CodecConfig {
    fn default() -> Self {
        CodecConfig {
            wavelet: WaveletId::Db2,
            max_level: 3,
            cost_threshold: 8.0,
            luma: QuantConfig::new(4.0, 1.0),
            chroma: QuantConfig::new(8.0, 2.0),
            rle_delta: 0,
        }
    }
}

impl CodecConfig {
    /// Default config with the same `(threshold, step)` on every plane.
    pub fn uniform(hard_threshold: f64, step: f64) -> Self {
        let q = QuantConfig::new(hard_threshold, step);
        CodecConfig { luma: q, chroma: q, ..Self::default() }
    }

    pub fn with_wavelet(mut self, wavelet: WaveletId) -> Self {
        self.wavelet = wavelet;
        self
    }

    pub fn with_levels(mut self, max_level: u8) -> Self {
        self.max_level = max_level;
        self
    }

    pub fn with_cost_threshold(mut self, t: f64) -> Self {
        self.cost_threshold = t;
        self
    }

    pub fn with_rle_delta(mut self, delta: u32) -> Self {
        self.rle_delta = delta;
        self
    }

    pub fn cost(&self) -> CostConfig {
        CostConfig::new(self.cost_threshold, self.max_level)
    }

    /// Quantizer settings of plane `index` (0 = luma).
    pub fn quant_for(&self, index: usize) -> QuantConfig {
        if index == 0 {
            self.luma
        } else {
            self.chroma
        }
    }

    pub fn validate_for(&self, width: usize, height: usize) -> Result<()> {
        self.luma.validate()?;
        self.chroma.validate()?;
        self.cost().validate_for(width, height)
    }
}

/// Quantizer settings as they travel in the container; the encoder uses the
/// same rounded values the decoder will read.
fn wire_quant(q: &QuantConfig) -> (f32, f32) {
    (q.hard_threshold as f32, q.step as f32)
}

/// One plane after tree search, thresholding and quantization.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantizedPlane {
    pub topology: Topology,
    pub scan: Vec<ScanOrder>,
    /// Quantized coefficients, leaf by leaf in coding order, each leaf in its
    /// scan order.
    pub symbols: Vec<i32>,
    pub hard_threshold: f32,
    pub step: f32,
}

fn is_dc_leaf(path: &[Subband]) -> bool {
    path.iter().all(|&b| b == Subband::A)
}

/// Best tree of one plane with every leaf thresholded; returns the tree and
/// its quantized symbols.
pub fn quantize_plane(plane: &Plane, cfg: &CodecConfig, quant: &QuantConfig) -> Result<(PacketTree, QuantizedPlane)> {
    let f = get_filters(cfg.wavelet);
    let tree = build_best_tree(plane, &f, &cfg.cost())?;
    let (thr, step) = wire_quant(quant);
    let (thr, step_f64) = (f64::from(thr), f64::from(step));
    let mut symbols = Vec::with_capacity(plane.len());
    let mut scan = Vec::new();
    for (path, block) in tree.flatten() {
        let q = if quant.protect_dc && is_dc_leaf(&path) {
            quantize(block, step_f64)
        } else {
            quantize(&hard_threshold(block, thr), step_f64)
        };
        let order = choose_scan(&q, block.width(), block.height());
        symbols.extend(order.positions(block.width(), block.height()).into_iter().map(|i| q[i]));
        scan.push(order);
    }
    let topology = tree.topology();
    Ok((tree, QuantizedPlane { topology, scan, symbols, hard_threshold: thr as f32, step }))
}

/// Column-major when that yields strictly fewer runs than row-major.
fn choose_scan(q: &[i32], width: usize, height: usize) -> ScanOrder {
    let runs = |order: ScanOrder| {
        let pos = order.positions(width, height);
        1 + pos.windows(2).filter(|w| q[w[0]] != q[w[1]]).count()
    };
    if runs(ScanOrder::ColumnMajor) < runs(ScanOrder::RowMajor) {
        ScanOrder::ColumnMajor
    } else {
        ScanOrder::RowMajor
    }
}

/// The lossy front half of the encoder, per plane.
pub fn quantize_image(img: &Image, cfg: &CodecConfig) -> Result<Vec<QuantizedPlane>> {
    check_image(img, cfg)?;
    let planes = image_to_planes(img)?;
    planes
        .planes()
        .iter()
        .enumerate()
        .map(|(i, p)| quantize_plane(p, cfg, &cfg.quant_for(i)).map(|(_, q)| q))
        .collect()
}

fn check_image(img: &Image, cfg: &CodecConfig) -> Result<()> {
    let (w, h) = (img.width(), img.height());
    if w < 2 || h < 2 {
        return Err(Error::invalid(format!("{w}x{h} image is too small to transform")));
    }
    if w > usize::from(u16::MAX) || h > usize::from(u16::MAX) {
        return Err(Error::invalid(format!("{w}x{h} image exceeds 65535x65535")));
    }
    cfg.validate_for(w, h)
}

fn frequencies(pairs: &[Run], key: impl Fn(&Run) -> i32) -> BTreeMap<i32, u64> {
    let mut m = BTreeMap::new();
    for p in pairs {
        *m.entry(key(p)).or_insert(0) += 1;
    }
    m
}

fn table_for(freqs: &BTreeMap<i32, u64>) -> Result<HuffmanTable> {
    if freqs.is_empty() {
        Ok(HuffmanTable::empty())
    } else {
        huffman_build(freqs)
    }
}

/// Smoothing, run-length pairing and Huffman coding of one quantized plane.
pub fn code_plane(q: &QuantizedPlane, rle_delta: u32) -> Result<PlaneRecord> {
    let smoothed = rle_smooth(&q.symbols, rle_delta);
    let pairs = rle_encode(&smoothed);
    let value_table = table_for(&frequencies(&pairs, |p| p.value))?;
    let run_table = table_for(&frequencies(&pairs, |p| p.run as i32))?;
    let values: Vec<i32> = pairs.iter().map(|p| p.value).collect();
    let runs: Vec<i32> = pairs.iter().map(|p| p.run as i32).collect();
    let mut w = BitWriter::new();
    huffman_encode(&values, &value_table, &mut w)?;
    huffman_encode(&runs, &run_table, &mut w)?;
    Ok(PlaneRecord {
        hard_threshold: q.hard_threshold,
        quant_step: q.step,
        rle_delta,
        topology: q.topology.clone(),
        scan: q.scan.clone(),
        value_table,
        run_table,
        pair_count: u32::try_from(pairs.len()).map_err(|_| Error::invalid("too many runs"))?,
        payload: w.finish(),
    })
}

pub fn encode(img: &Image, cfg: &CodecConfig) -> Result<Vec<u8>> {
    let quantized = quantize_image(img, cfg)?;
    let header = ContainerHeader {
        colorspace: if img.is_gray() { ColorSpace::Gray } else { ColorSpace::Yuv },
        width: img.width() as u16,
        height: img.height() as u16,
        wavelet: cfg.wavelet,
        max_level: cfg.max_level,
        plane_count: quantized.len() as u8,
    };
    let records = quantized
        .iter()
        .map(|q| code_plane(q, cfg.rle_delta))
        .collect::<Result<Vec<_>>>()?;
    Ok(write_container(&header, &records))
}

/// Parses a container and recovers each plane's (smoothed) quantized symbols.
pub fn decode_symbols(bytes: &[u8]) -> Result<(Container, Vec<Vec<i32>>)> {
    let container = read_container(bytes)?;
    let symbols = container
        .planes
        .iter()
        .map(|rec| rle_decode(&rec.pairs()?))
        .collect::<Result<Vec<_>>>()?;
    Ok((container, symbols))
}

pub fn decode(bytes: &[u8]) -> Result<Image> {
    let (container, symbols) = decode_symbols(bytes)?;
    let h = &container.header;
    let (width, height) = (usize::from(h.width), usize::from(h.height));
    let f = get_filters(h.wavelet);
    let mut planes = Vec::with_capacity(container.planes.len());
    for (rec, syms) in container.planes.iter().zip(symbols) {
        let step = f64::from(rec.quant_step);
        let dims = rec.topology.leaf_dims(width, height)?;
        let mut blocks = Vec::with_capacity(dims.len());
        let mut rest = syms.as_slice();
        for ((w, hgt), order) in dims.into_iter().zip(&rec.scan) {
            if rest.len() < w * hgt {
                return Err(Error::CorruptData("fewer coefficients than the tree needs"));
            }
            let (head, tail) = rest.split_at(w * hgt);
            let mut raster = vec![0; w * hgt];
            for (&s, i) in head.iter().zip(order.positions(w, hgt)) {
                raster[i] = s;
            }
            blocks.push(dequantize(&raster, step, w, hgt)?);
            rest = tail;
        }
        if !rest.is_empty() {
            return Err(Error::CorruptData("more coefficients than the tree needs"));
        }
        let tree = PacketTree::from_leaves(&rec.topology, h.wavelet, width, height, blocks)?;
        planes.push(reconstruct(&tree, &f)?);
    }
    planes_to_image(&PlaneSet::new(planes)?)
}

/// Quality and size measurements of one encode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    /// `f64::INFINITY` for a lossless result.
    pub psnr_db: f64,
    pub compression_ratio: f64,
    pub percentage_compression: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompressionStats {
    pub ratio: f64,
    pub percentage: f64,
}

/// `10 log10(255^2 / MSE)` over all samples of all channels.
pub fn psnr(a: &Image, b: &Image) -> Result<f64> {
    if (a.width(), a.height(), a.channels()) != (b.width(), b.height(), b.channels()) {
        return Err(Error::DimensionMismatch(format!(
            "{}x{}x{} vs {}x{}x{}",
            a.width(),
            a.height(),
            a.channels(),
            b.width(),
            b.height(),
            b.channels()
        )));
    }
    let sse: f64 = a
        .samples()
        .iter()
        .zip(b.samples())
        .map(|(&x, &y)| (f64::from(x) - f64::from(y)).powi(2))
        .sum();
    if sse == 0.0 {
        return Ok(f64::INFINITY);
    }
    let mse = sse / a.samples().len() as f64;
    Ok(10.0 * (255.0f64 * 255.0 / mse).log10())
}

/// Ratio `original / compressed` and percentage `(1 - compressed / original) * 100`.
pub fn compression_stats(original_bytes: usize, compressed_bytes: usize) -> Result<CompressionStats> {
    if original_bytes == 0 || compressed_bytes == 0 {
        return Err(Error::invalid("byte counts must be positive"));
    }
    let (o, c) = (original_bytes as f64, compressed_bytes as f64);
    Ok(CompressionStats { ratio: o / c, percentage: (1.0 - c / o) * 100.0 })
}

/// Compression measured against the raw sample count.
pub fn metrics(original: &Image, reconstructed: &Image, compressed_len: usize) -> Result<Metrics> {
    let stats = compression_stats(original.raw_len(), compressed_len)?;
    Ok(Metrics {
        psnr_db: psnr(original, reconstructed)?,
        compression_ratio: stats.ratio,
        percentage_compression: stats.percentage,
    })
}

/// Formats a PSNR the way the tools print it: four decimals or `inf`.
pub fn format_psnr(db: f64) -> String {
    if db.is_infinite() {
        "inf".to_string()
    } else {
        format!("{db:.4}")
    }
}
