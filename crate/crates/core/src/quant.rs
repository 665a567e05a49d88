//! Hard thresholding and uniform scalar quantization of leaf blocks.

use crate::error::{Error, Result};
use crate::pixmap::Plane;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantConfig {
    /// Coefficients with `|x| <= hard_threshold` are zeroed. `0` disables
    /// thresholding apart from flushing zeros.
    pub hard_threshold: f64,
    /// Quantizer step, `> 0`.
    pub step: f64,
    /// Exempt the all-approximation leaf from thresholding.
    pub protect_dc: bool,
}

impl QuantConfig {
    pub fn new(hard_threshold: f64, step: f64) -> Self {
        QuantConfig { hard_threshold, step, protect_dc: true }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::invalid(format!("quantizer step {} must be finite and > 0", self.step)));
        }
        if !(self.hard_threshold >= 0.0 && self.hard_threshold.is_finite()) {
            return Err(Error::invalid(format!(
                "hard threshold {} must be finite and >= 0",
                self.hard_threshold
            )));
        }
        Ok(())
    }
}

/// Zeroes every value with `|x| <= t`.
pub fn hard_threshold(block: &Plane, t: f64) -> Plane {
    block.map(|x| if x.abs() <= t { 0.0 } else { x })
}

/// `round(x / step)`, half away from zero. Values beyond the `i32` range saturate.
pub fn quantize(block: &Plane, step: f64) -> Vec<i32> {
    quantize_values(block.values(), step)
}

pub fn quantize_values(values: &[f64], step: f64) -> Vec<i32> {
    values.iter().map(|&x| (x / step).round() as i32).collect()
}

pub fn dequantize(q: &[i32], step: f64, width: usize, height: usize) -> Result<Plane> {
    if q.len() != width * height {
        return Err(Error::DimensionMismatch(format!(
            "{} symbols for a {width}x{height} block",
            q.len()
        )));
    }
    Ok(Plane::from_raw(width, height, q.iter().map(|&v| f64::from(v) * step).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn row(v: &[f64]) -> Plane {
        Plane::new(v.len(), 1, v.to_vec()).unwrap()
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(hard_threshold(&row(&[5.0, -3.0, 0.5, 2.0]), 2.0).values(), &[5.0, -3.0, 0.0, 0.0]);
        let t0 = hard_threshold(&row(&[0.0, -0.0, 1e-300, -7.0]), 0.0);
        assert_eq!(t0.values(), &[0.0, 0.0, 1e-300, -7.0]);
        assert!(t0.values()[1].is_sign_positive());
        assert!(hard_threshold(&row(&[1.0, -1.5, 0.2]), 3.0).values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn quantize_examples() {
        assert_eq!(quantize(&row(&[0.4, -2.5, 2.5, -0.49]), 1.0), vec![0, -3, 3, 0]);
        assert_eq!(dequantize(&[0, -3], 0.5, 2, 1).unwrap().values(), &[0.0, -1.5]);
        assert!(dequantize(&[1, 2, 3], 1.0, 2, 1).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(QuantConfig::new(0.0, 1.0).validate().is_ok());
        assert!(QuantConfig::new(0.0, 0.0).validate().is_err());
        assert!(QuantConfig::new(-1.0, 1.0).validate().is_err());
    }

    proptest! {
        #[test]
        fn round_trip_within_half_step(x in -1e6f64..1e6, step in 0.01f64..100.0) {
            let q = quantize_values(&[x], step);
            let back = dequantize(&q, step, 1, 1).unwrap().values()[0];
            prop_assert!((back - x).abs() <= step / 2.0 * (1.0 + 1e-12));
        }

        #[test]
        fn threshold_is_idempotent(v in proptest::collection::vec(-50.0f64..50.0, 1..64), t in 0.0f64..40.0) {
            let p = row(&v);
            let once = hard_threshold(&p, t);
            prop_assert_eq!(hard_threshold(&once, t), once);
        }

        #[test]
        fn nonzeros_nonincreasing_in_threshold(
            v in proptest::collection::vec(-50.0f64..50.0, 1..64),
            t1 in 0.0f64..40.0,
            dt in 0.0f64..20.0,
        ) {
            let p = row(&v);
            let nz = |t| quantize(&hard_threshold(&p, t), 1.0).iter().filter(|&&q| q != 0).count();
            prop_assert!(nz(t1 + dt) <= nz(t1));
        }
    }
}
