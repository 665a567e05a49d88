//! Lossy still-image codec built on wavelet-packet best trees.
//!
//! ```text
//! PNM -> Y/U/V planes -> best packet tree -> threshold + quantize
//!     -> run smoothing -> run-length pairs -> canonical Huffman -> WPB1 container
//! ```
//!
//! The best tree is grown top-down: a subband is split into its four
//! children only while the children's combined cost (the number of
//! coefficients whose magnitude exceeds a threshold) does not exceed the
//! parent's cost.
//!
//! ```
//! use wpb_codec::{decode, encode, psnr, synth, CodecConfig};
//!
//! let img = synth::generate(synth::SynthKind::Gradient, 64, 0).unwrap();
//! let bytes = encode(&img, &CodecConfig::default()).unwrap();
//! let back = decode(&bytes).unwrap();
//! assert!(psnr(&img, &back).unwrap() > 40.0);
//! ```

pub mod bits;
pub mod codec;
pub mod container;
pub mod entropy;
pub mod error;
pub mod packet;
pub mod pixmap;
pub mod quant;
pub mod synth;
pub mod wavelet;

pub use codec::{
    compression_stats, decode, decode_symbols, encode, format_psnr, metrics, psnr, quantize_image, CodecConfig,
    CompressionStats, Metrics, QuantizedPlane,
};
pub use container::{read_container, write_container, ColorSpace, Container, ContainerHeader, PlaneRecord, ScanOrder};
pub use error::{Error, Result};
pub use packet::{build_best_tree, cost, flatten_leaves, reconstruct, CostConfig, PacketNode, PacketTree, Topology};
pub use pixmap::{load_pnm, rgb_to_yuv, save_pnm, yuv_to_rgb, Image, Plane, PlaneSet};
pub use quant::QuantConfig;
pub use wavelet::{analyze2d, get_filters, synthesize2d, FilterPair, QuadSplit, Subband, WaveletId};
