use std::cmp::Ordering;
use std::fmt;
use std::ops::{Div, Mul, Neg};

/// A real number stored as `sign · exp(log_mag)`.
///
/// Zero is encoded as `sign = 0, log_mag = -∞`; the two fields are kept
/// consistent by every constructor.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LogSigned {
    log_mag: f64,
    sign: i8,
}

impl LogSigned {
    pub const ZERO: LogSigned = LogSigned {
        log_mag: f64::NEG_INFINITY,
        sign: 0,
    };
    pub const ONE: LogSigned = LogSigned {
        log_mag: 0.0,
        sign: 1,
    };

    /// Builds a value from its parts. A `-∞` magnitude or a zero sign both
    /// collapse to [`LogSigned::ZERO`].
    pub fn new(log_mag: f64, sign: i8) -> Self {
        if sign == 0 || log_mag == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogSigned {
                log_mag,
                sign: sign.signum(),
            }
        }
    }

    /// Positive value `exp(log_mag)`.
    pub fn from_log(log_mag: f64) -> Self {
        Self::new(log_mag, 1)
    }

    pub fn from_f64(v: f64) -> Self {
        match v.partial_cmp(&0.0) {
            Some(Ordering::Greater) => Self::new(v.ln(), 1),
            Some(Ordering::Less) => Self::new((-v).ln(), -1),
            _ => Self::ZERO,
        }
    }

    pub fn log_mag(&self) -> f64 {
        self.log_mag
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Converts back to `f64`; saturates to `±∞` or `0` outside the double range.
    pub fn to_f64(&self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            f64::from(self.sign) * self.log_mag.exp()
        }
    }

    pub fn abs(&self) -> Self {
        Self::new(self.log_mag, self.sign.abs())
    }

    /// `self^p` for a positive value.
    pub fn powf(&self, p: f64) -> Self {
        match self.sign {
            0 if p > 0.0 => Self::ZERO,
            0 => Self::from_log(if p == 0.0 { 0.0 } else { f64::INFINITY }),
            1 => Self::from_log(self.log_mag * p),
            _ => panic!("powf of a negative LogSigned"),
        }
    }

    /// Signed addition carried out without leaving the log domain.
    pub fn add(&self, other: &Self) -> Self {
        if self.sign == 0 {
            return *other;
        }
        if other.sign == 0 {
            return *self;
        }
        let (big, small) = if self.log_mag >= other.log_mag {
            (self, other)
        } else {
            (other, self)
        };
        let ratio = (small.log_mag - big.log_mag).exp();
        if big.sign == small.sign {
            Self::new(big.log_mag + ratio.ln_1p(), big.sign)
        } else if ratio == 1.0 {
            Self::ZERO
        } else {
            Self::new(big.log_mag + (-ratio).ln_1p(), big.sign)
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&-*other)
    }
}

impl Default for LogSigned {
    fn default() -> Self {
        Self::ZERO
    }
}

impl Mul for LogSigned {
    type Output = LogSigned;
    fn mul(self, rhs: LogSigned) -> LogSigned {
        LogSigned::new(self.log_mag + rhs.log_mag, self.sign * rhs.sign)
    }
}

impl Div for LogSigned {
    type Output = LogSigned;
    fn div(self, rhs: LogSigned) -> LogSigned {
        assert!(rhs.sign != 0, "division of LogSigned by zero");
        LogSigned::new(self.log_mag - rhs.log_mag, self.sign * rhs.sign)
    }
}

impl Neg for LogSigned {
    type Output = LogSigned;
    fn neg(self) -> LogSigned {
        LogSigned::new(self.log_mag, -self.sign)
    }
}

impl fmt::Display for LogSigned {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => write!(f, "{}exp({})", if s < 0 { "-" } else { "" }, self.log_mag),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_encoding() {
        assert_eq!(LogSigned::new(f64::NEG_INFINITY, 1), LogSigned::ZERO);
        assert_eq!(LogSigned::new(3.0, 0), LogSigned::ZERO);
        assert_eq!(LogSigned::from_f64(0.0).log_mag(), f64::NEG_INFINITY);
        assert!(LogSigned::from_f64(-0.0).is_zero());
    }

    #[test]
    fn survives_beyond_double_range() {
        let big = LogSigned::from_log(900.0);
        let tiny = LogSigned::from_log(-905.0);
        let prod = big * tiny;
        assert!((prod.to_f64() - (-5.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn cancellation_to_zero() {
        let a = LogSigned::from_f64(2.5);
        assert!(a.sub(&a).is_zero());
    }

    proptest! {
        #[test]
        fn roundtrip_and_products(a in -1e3f64..1e3, b in -1e3f64..1e3) {
            let la = LogSigned::from_f64(a);
            let lb = LogSigned::from_f64(b);
            prop_assert!((la.to_f64() - a).abs() <= 1e-12 * a.abs());
            let p = (la * lb).to_f64();
            prop_assert!((p - a * b).abs() <= 1e-12 * (a * b).abs());
            if b != 0.0 {
                let q = (la / lb).to_f64();
                prop_assert!((q - a / b).abs() <= 1e-12 * (a / b).abs());
            }
            let s = la.add(&lb).to_f64();
            prop_assert!((s - (a + b)).abs() <= 1e-12 * (a.abs() + b.abs()));
            prop_assert_eq!(la.is_zero(), la.log_mag() == f64::NEG_INFINITY);
        }
    }
}
