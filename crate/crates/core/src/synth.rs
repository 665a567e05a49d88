//! Deterministic synthetic test images.

use std::fmt;
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::pixmap::Image;

/// Height of one stripe in the banded images.
pub const BAND: usize = 8;
/// Sample value of [`SynthKind::Constant`].
pub const CONSTANT_LEVEL: u8 = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynthKind {
    /// Horizontal stripes: 8-row bands alternating 0 and 255, starting black.
    Horizontal,
    /// Transpose of `Horizontal`.
    Vertical,
    /// `x + y` ramp scaled to 0..=255.
    Gradient,
    Constant,
    /// Uniform random samples from a seeded ChaCha8 stream.
    Noise,
}

impl SynthKind {
    pub const ALL: [SynthKind; 5] =
        [SynthKind::Horizontal, SynthKind::Vertical, SynthKind::Gradient, SynthKind::Constant, SynthKind::Noise];

    pub fn name(self) -> &'static str {
        match self {
            SynthKind::Horizontal => "horizontal",
            SynthKind::Vertical => "vertical",
            SynthKind::Gradient => "gradient",
            SynthKind::Constant => "constant",
            SynthKind::Noise => "noise",
        }
    }
}

impl fmt::Display for SynthKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SynthKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SynthKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown image kind {s:?}")))
    }
}

fn band(i: usize) -> u8 {
    if (i / BAND).is_multiple_of(2) {
        0
    } else {
        255
    }
}

/// A `size x size` gray image of the given kind. `seed` only affects noise.
pub fn generate(kind: SynthKind, size: usize, seed: u64) -> Result<Image> {
    if size < 2 {
        return Err(Error::invalid(format!("image size {size} must be at least 2")));
    }
    if size > usize::from(u16::MAX) {
        return Err(Error::invalid(format!("image size {size} exceeds 65535")));
    }
    match kind {
        SynthKind::Horizontal => Image::from_fn(size, size, |_, y| [band(y)]),
        SynthKind::Vertical => Image::from_fn(size, size, |x, _| [band(x)]),
        SynthKind::Gradient => {
            let span = (2 * (size - 1)) as f64;
            Image::from_fn(size, size, |x, y| [((x + y) as f64 * 255.0 / span).round() as u8])
        }
        SynthKind::Constant => Image::new(size, size, 1, vec![CONSTANT_LEVEL; size * size]),
        SynthKind::Noise => {
            let mut samples = vec![0u8; size * size];
            ChaCha8Rng::seed_from_u64(seed).fill_bytes(&mut samples);
            Image::new(size, size, 1, samples)
        }
    }
}
