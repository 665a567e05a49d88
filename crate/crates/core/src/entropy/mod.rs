//! Coefficient coding: run smoothing, run-length pairs and canonical Huffman codes.

mod huffman;
mod rle;

pub use huffman::{huffman_build, huffman_decode, huffman_encode, HuffmanTable, MAX_CODE_LEN};
pub use rle::{rle_decode, rle_encode, rle_smooth, Run};
