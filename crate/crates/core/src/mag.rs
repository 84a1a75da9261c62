//! Positive magnitudes stored together with their base-`b` logarithm, and integer scales.

/// Integer scale `floor(log_b x)`; `None` stands for `-inf` (a vanishing quantity).
pub type Scale = Option<i64>;

/// Slack added before flooring so that `b^n` computed in floating point maps back to `n`.
const FLOOR_SLACK: f64 = 1e-9;

/// Floor of a base-`b` logarithm, robust to round-off just below an integer.
pub fn floor_log(log_b: f64) -> Scale {
    if log_b == f64::NEG_INFINITY {
        None
    } else {
        Some((log_b + FLOOR_SLACK).floor() as i64)
    }
}

/// Shifts a scale by an integer offset, keeping `-inf` absorbing.
pub fn shift(s: Scale, by: i64) -> Scale {
    s.map(|v| v + by)
}

/// Difference of two scales; `-inf` if the left operand is `-inf`.
///
/// The right operand must be finite.
pub fn diff(a: Scale, b: Scale) -> Scale {
    match (a, b) {
        (Some(x), Some(y)) => Some(x - y),
        (None, _) => None,
        (Some(_), None) => panic!("scale difference with -inf subtrahend"),
    }
}

/// Sum of two scales (product of magnitudes).
pub fn add(a: Scale, b: Scale) -> Scale {
    match (a, b) {
        (Some(x), Some(y)) => Some(x + y),
        _ => None,
    }
}

/// Renders a scale, printing `-inf` for vanishing quantities.
pub fn fmt_scale(s: Scale) -> String {
    match s {
        Some(v) => v.to_string(),
        None => "-inf".to_string(),
    }
}

/// A nonnegative quantity with its logarithm in base `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mag {
    value: f64,
    log: f64,
}

impl Mag {
    /// The zero magnitude.
    pub const ZERO: Mag = Mag { value: 0.0, log: f64::NEG_INFINITY };

    /// Builds a magnitude from a nonnegative value.
    pub fn from_value(value: f64, base: f64) -> Mag {
        assert!(value >= 0.0 && value.is_finite(), "magnitude must be finite and nonnegative");
        if value == 0.0 {
            Mag::ZERO
        } else {
            Mag { value, log: value.ln() / base.ln() }
        }
    }

    /// Builds `b^log` exactly in log space.
    pub fn from_log(log: f64, base: f64) -> Mag {
        if log == f64::NEG_INFINITY {
            Mag::ZERO
        } else {
            Mag { value: base.powf(log), log }
        }
    }

    /// Builds `b^scale`; `None` gives zero.
    pub fn from_scale(scale: Scale, base: f64) -> Mag {
        match scale {
            Some(n) => Mag::from_log(n as f64, base),
            None => Mag::ZERO,
        }
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    /// Logarithm in base `b` (`-inf` for zero).
    pub fn log(&self) -> f64 {
        self.log
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0.0
    }

    /// Integer scale `floor(log_b value)`.
    pub fn scale(&self) -> Scale {
        floor_log(self.log)
    }

    /// Sum of two magnitudes; the logarithm is kept exact when one term vanishes.
    pub fn plus(self, other: Mag, base: f64) -> Mag {
        if other.is_zero() {
            self
        } else if self.is_zero() {
            other
        } else {
            Mag::from_value(self.value + other.value, base)
        }
    }

    /// Multiplies by a positive integer factor.
    pub fn times(self, factor: f64, base: f64) -> Mag {
        if self.is_zero() || factor == 0.0 {
            Mag::ZERO
        } else {
            Mag::from_log(self.log + factor.ln() / base.ln(), base)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scale_of_unity_is_zero() {
        assert_eq!(Mag::from_value(1.0, 10.0).scale(), Some(0));
    }

    #[test]
    fn scale_floors_toward_minus_infinity() {
        assert_eq!(Mag::from_value(0.02, 10.0).scale(), Some(-2));
        assert_eq!(Mag::from_value(1e-5, 10.0).scale(), Some(-5));
        assert_eq!(Mag::from_value(5f64.powi(-13), 5.0).scale(), Some(-13));
    }

    #[test]
    fn zero_has_no_scale() {
        assert_eq!(Mag::ZERO.scale(), None);
        assert_eq!(Mag::from_value(0.0, 10.0).scale(), None);
    }

    #[test]
    fn plus_keeps_exact_log_with_zero() {
        let m = Mag::from_scale(Some(-7), 10.0);
        assert_eq!(m.plus(Mag::ZERO, 10.0).log(), -7.0);
        assert_eq!(Mag::ZERO.plus(m, 10.0).log(), -7.0);
    }

    #[test]
    fn scale_helpers_treat_none_as_minus_infinity() {
        assert!(None < Some(-100));
        assert_eq!(diff(Some(-3), Some(-5)), Some(2));
        assert_eq!(diff(None, Some(1)), None);
        assert_eq!(add(Some(2), None), None);
        assert_eq!(fmt_scale(None), "-inf");
    }
}
