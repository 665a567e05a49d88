//! Raster data model, binary PGM/PPM I/O and luma/colour-difference separation.

use crate::error::{Error, Result};

/// An 8-bit raster image, row-major and channel-interleaved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Image {
    width: usize,
    height: usize,
    channels: usize,
    samples: Vec<u8>,
}

impl Image {
    pub fn new(width: usize, height: usize, channels: usize, samples: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid("image dimensions must be positive"));
        }
        if channels != 1 && channels != 3 {
            return Err(Error::invalid(format!("unsupported channel count {channels}")));
        }
        let expected = width
            .checked_mul(height)
            .and_then(|n| n.checked_mul(channels))
            .ok_or_else(|| Error::invalid("image dimensions overflow"))?;
        if samples.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "{width}x{height}x{channels} image needs {expected} samples, got {}",
                samples.len()
            )));
        }
        Ok(Image { width, height, channels, samples })
    }

    /// Builds an image by evaluating `f(x, y)` for every pixel; `f` returns one
    /// sample per channel.
    pub fn from_fn<const C: usize>(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> [u8; C],
    ) -> Result<Self> {
        let mut samples = Vec::with_capacity(width * height * C);
        for y in 0..height {
            for x in 0..width {
                samples.extend_from_slice(&f(x, y));
            }
        }
        Image::new(width, height, C, samples)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<u8> {
        self.samples
    }

    pub fn is_gray(&self) -> bool {
        self.channels == 1
    }

    /// Sample `c` of pixel `(x, y)`.
    pub fn sample(&self, x: usize, y: usize, c: usize) -> u8 {
        self.samples[(y * self.width + x) * self.channels + c]
    }

    /// Number of raw payload bytes (`width * height * channels`).
    pub fn raw_len(&self) -> usize {
        self.samples.len()
    }
}

/// One channel or one subband: a row-major array of finite reals.
#[derive(Debug, Clone, PartialEq)]
pub struct Plane {
    width: usize,
    height: usize,
    values: Vec<f64>,
}

impl Plane {
    pub fn new(width: usize, height: usize, values: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid("plane dimensions must be positive"));
        }
        if values.len() != width * height {
            return Err(Error::DimensionMismatch(format!(
                "{width}x{height} plane needs {} values, got {}",
                width * height,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("plane values must be finite"));
        }
        Ok(Plane { width, height, values })
    }

    pub(crate) fn from_raw(width: usize, height: usize, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), width * height);
        Plane { width, height, values }
    }

    pub fn zeros(width: usize, height: usize) -> Self {
        Plane { width, height, values: vec![0.0; width * height] }
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                values.push(f(x, y));
            }
        }
        Plane::new(width, height, values)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.values[y * self.width + x]
    }

    /// Applies `f` to every value, keeping the dimensions.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Plane {
        Plane::from_raw(self.width, self.height, self.values.iter().map(|&v| f(v)).collect())
    }

    /// Largest absolute elementwise difference; `None` when dimensions differ.
    pub fn max_abs_diff(&self, other: &Plane) -> Option<f64> {
        if self.dims() != other.dims() {
            return None;
        }
        Some(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
        )
    }

    pub fn transpose(&self) -> Plane {
        let mut values = Vec::with_capacity(self.values.len());
        for x in 0..self.width {
            for y in 0..self.height {
                values.push(self.get(x, y));
            }
        }
        Plane::from_raw(self.height, self.width, values)
    }
}

/// The planes handed to the transform: one luma plane for gray input, or
/// Y, U, V for colour input.
#[derive(Debug, Clone, PartialEq)]
pub struct PlaneSet {
    width: usize,
    height: usize,
    planes: Vec<Plane>,
}

impl PlaneSet {
    pub fn new(planes: Vec<Plane>) -> Result<Self> {
        if planes.len() != 1 && planes.len() != 3 {
            return Err(Error::invalid(format!("plane set needs 1 or 3 planes, got {}", planes.len())));
        }
        let (width, height) = planes[0].dims();
        if planes.iter().any(|p| p.dims() != (width, height)) {
            return Err(Error::DimensionMismatch("planes must share dimensions".into()));
        }
        Ok(PlaneSet { width, height, planes })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn planes(&self) -> &[Plane] {
        &self.planes
    }

    pub fn into_planes(self) -> Vec<Plane> {
        self.planes
    }
}

fn is_pnm_space(b: u8) -> bool {
    matches!(b, b' ' | b'\t' | b'\n' | b'\r' | 0x0b | 0x0c)
}

struct HeaderCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl HeaderCursor<'_> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if is_pnm_space(b) {
                self.pos += 1;
            } else if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &'static str) -> Result<u32> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::MalformedHeader(what));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or(Error::MalformedHeader(what))
    }
}

/// Parses a binary PGM (`P5`) or PPM (`P6`) with maxval 255.
pub fn load_pnm(bytes: &[u8]) -> Result<Image> {
    let magic = bytes.get(..2).unwrap_or(bytes);
    let channels = match magic {
        b"P5" => 1,
        b"P6" => 3,
        _ => return Err(Error::UnsupportedMagic(String::from_utf8_lossy(magic).into_owned())),
    };
    let mut cur = HeaderCursor { bytes, pos: 2 };
    if !cur.bytes.get(2).copied().is_some_and(is_pnm_space) {
        return Err(Error::MalformedHeader("missing whitespace after magic"));
    }
    let width = cur.number("width")? as usize;
    let height = cur.number("height")? as usize;
    let maxval = cur.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::MalformedHeader("zero dimension"));
    }
    if maxval != 255 {
        return Err(Error::UnsupportedMaxval(maxval));
    }
    // Exactly one whitespace byte separates the header from the raster.
    match bytes.get(cur.pos) {
        Some(&b) if is_pnm_space(b) => cur.pos += 1,
        _ => return Err(Error::MalformedHeader("missing whitespace after maxval")),
    }
    let expected = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(channels))
        .ok_or(Error::MalformedHeader("dimensions overflow"))?;
    let payload = &bytes[cur.pos..];
    if payload.len() < expected {
        return Err(Error::TruncatedPayload { expected, found: payload.len() });
    }
    Image::new(width, height, channels, payload[..expected].to_vec())
}

/// Serializes as `P5` (gray) or `P6` (RGB) with a minimal header.
pub fn save_pnm(img: &Image) -> Vec<u8> {
    let magic = if img.is_gray() { "P5" } else { "P6" };
    let header = format!("{magic}\n{} {}\n255\n", img.width, img.height);
    let mut out = Vec::with_capacity(header.len() + img.samples.len());
    out.extend_from_slice(header.as_bytes());
    out.extend_from_slice(&img.samples);
    out
}

/// Rounds half away from zero and clamps into the 8-bit range.
pub fn to_u8(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

fn luma(r: u8, g: u8, b: u8) -> f64 {
    // Integer numerator keeps gray pixels exact: Y == R == G == B.
    f64::from(299 * u32::from(r) + 587 * u32::from(g) + 114 * u32::from(b)) / 1000.0
}

/// Splits an RGB image into Y, U = B - Y and V = R - Y planes (unclamped reals).
pub fn rgb_to_yuv(img: &Image) -> Result<PlaneSet> {
    if img.channels != 3 {
        return Err(Error::invalid(format!("rgb_to_yuv needs 3 channels, got {}", img.channels)));
    }
    let n = img.width * img.height;
    let (mut y, mut u, mut v) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    for px in img.samples.chunks_exact(3) {
        let l = luma(px[0], px[1], px[2]);
        y.push(l);
        u.push(f64::from(px[2]) - l);
        v.push(f64::from(px[0]) - l);
    }
    let (w, h) = (img.width, img.height);
    PlaneSet::new(vec![Plane::from_raw(w, h, y), Plane::from_raw(w, h, u), Plane::from_raw(w, h, v)])
}

/// Inverse of [`rgb_to_yuv`], rounding and clamping to 8-bit samples.
pub fn yuv_to_rgb(ps: &PlaneSet) -> Result<Image> {
    let [y, u, v] = ps.planes() else {
        return Err(Error::invalid(format!("yuv_to_rgb needs 3 planes, got {}", ps.planes.len())));
    };
    let mut samples = Vec::with_capacity(ps.width * ps.height * 3);
    for ((&l, &cb), &cr) in y.values().iter().zip(u.values()).zip(v.values()) {
        let b = cb + l;
        let r = cr + l;
        let g = (l - 0.299 * r - 0.114 * b) / 0.587;
        samples.extend_from_slice(&[to_u8(r), to_u8(g), to_u8(b)]);
    }
    Image::new(ps.width, ps.height, 3, samples)
}

/// Gray images become a single luma plane; colour images go through [`rgb_to_yuv`].
pub fn image_to_planes(img: &Image) -> Result<PlaneSet> {
    if img.is_gray() {
        let values = img.samples.iter().map(|&s| f64::from(s)).collect();
        PlaneSet::new(vec![Plane::from_raw(img.width, img.height, values)])
    } else {
        rgb_to_yuv(img)
    }
}

/// Inverse of [`image_to_planes`].
pub fn planes_to_image(ps: &PlaneSet) -> Result<Image> {
    match ps.planes() {
        [gray] => Image::new(ps.width, ps.height, 1, gray.values().iter().map(|&v| to_u8(v)).collect()),
        _ => yuv_to_rgb(ps),
    }
}
