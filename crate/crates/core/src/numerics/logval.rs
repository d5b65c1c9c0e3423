//! Signed values stored as (sign, natural log of magnitude).
//!
//! Distance spectra of codes with N around 10^3 reach magnitudes such as
//! binom(1033, 500) that do not fit in an `f64`, so every spectrum entry and
//! most bound intermediates travel through this type or through plain
//! natural-log `f64`s.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Div, Mul};

/// A real number `sign * exp(ln_abs)`.
///
/// Invariant: `sign == 0` exactly when `ln_abs == -inf`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogValue {
    sign: i8,
    ln_abs: f64,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue {
        sign: 0,
        ln_abs: f64::NEG_INFINITY,
    };
    pub const ONE: LogValue = LogValue {
        sign: 1,
        ln_abs: 0.0,
    };

    /// Positive value with the given natural log; `-inf` yields zero.
    pub fn from_ln(ln_abs: f64) -> Self {
        if ln_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            debug_assert!(!ln_abs.is_nan(), "NaN log magnitude");
            LogValue { sign: 1, ln_abs }
        }
    }

    pub fn from_sign_ln(sign: i8, ln_abs: f64) -> Self {
        if sign == 0 || ln_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogValue {
                sign: sign.signum(),
                ln_abs,
            }
        }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            LogValue {
                sign: if x > 0.0 { 1 } else { -1 },
                ln_abs: x.abs().ln(),
            }
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// Natural log of the magnitude (`-inf` for zero).
    pub fn ln_abs(&self) -> f64 {
        self.ln_abs
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn is_positive(&self) -> bool {
        self.sign > 0
    }

    /// Linear value; overflows to `±inf` beyond `f64` range.
    pub fn to_f64(&self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.ln_abs.exp(),
        }
    }

    /// `log10 |x|`.
    pub fn log10_abs(&self) -> f64 {
        self.ln_abs / std::f64::consts::LN_10
    }

    pub fn powf(&self, p: f64) -> Self {
        assert!(self.sign >= 0, "powf of a negative LogValue");
        if self.sign == 0 {
            if p == 0.0 {
                Self::ONE
            } else {
                Self::ZERO
            }
        } else {
            Self::from_ln(self.ln_abs * p)
        }
    }

    pub fn abs(&self) -> Self {
        Self::from_sign_ln(self.sign.abs(), self.ln_abs)
    }

    pub fn neg(&self) -> Self {
        Self::from_sign_ln(-self.sign, self.ln_abs)
    }

    pub fn add(&self, other: LogValue) -> Self {
        log_sum_exp(&[*self, other])
    }

    /// Total order on the represented real numbers.
    pub fn cmp_value(&self, other: &LogValue) -> Ordering {
        match self.sign.cmp(&other.sign) {
            Ordering::Equal => match self.sign {
                0 => Ordering::Equal,
                1 => self.ln_abs.total_cmp(&other.ln_abs),
                _ => other.ln_abs.total_cmp(&self.ln_abs),
            },
            o => o,
        }
    }
}

impl Default for LogValue {
    fn default() -> Self {
        Self::ZERO
    }
}

impl Mul for LogValue {
    type Output = LogValue;
    fn mul(self, rhs: LogValue) -> LogValue {
        LogValue::from_sign_ln(self.sign * rhs.sign, self.ln_abs + rhs.ln_abs)
    }
}

impl Div for LogValue {
    type Output = LogValue;
    fn div(self, rhs: LogValue) -> LogValue {
        assert!(!rhs.is_zero(), "division by a zero LogValue");
        LogValue::from_sign_ln(self.sign * rhs.sign, self.ln_abs - rhs.ln_abs)
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            1 => write!(f, "exp({})", self.ln_abs),
            _ => write!(f, "-exp({})", self.ln_abs),
        }
    }
}

/// `ln Σ exp(x_i)` over non-negative quantities given by their logs.
///
/// `-inf` entries are zeros; an empty input yields `-inf`.
pub fn ln_sum_exp<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let terms: Vec<f64> = terms.into_iter().collect();
    ln_sum_exp_slice(&terms)
}

pub fn ln_sum_exp_slice(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    let s: f64 = terms.iter().map(|&t| (t - max).exp()).sum();
    max + s.ln()
}

/// `ln(exp(a) + exp(b))`.
pub fn ln_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `ln(1 - exp(x))` for `x <= 0`.
pub fn ln_1m_exp(x: f64) -> f64 {
    if x > -std::f64::consts::LN_2 {
        (-x.exp_m1()).ln()
    } else {
        (-x.exp()).ln_1p()
    }
}

/// `ln Σ sign_i exp(m_i)` with the largest magnitude factored out.
///
/// The result carries sign `-1` when the signed sum is negative; callers
/// decide whether that is acceptable.
pub fn log_sum_exp(terms: &[LogValue]) -> LogValue {
    let pos = ln_sum_exp(terms.iter().filter(|t| t.sign > 0).map(|t| t.ln_abs));
    let neg = ln_sum_exp(terms.iter().filter(|t| t.sign < 0).map(|t| t.ln_abs));
    if neg == f64::NEG_INFINITY {
        return LogValue::from_ln(pos);
    }
    if pos == f64::NEG_INFINITY {
        return LogValue::from_sign_ln(-1, neg);
    }
    match pos.total_cmp(&neg) {
        Ordering::Equal => LogValue::ZERO,
        Ordering::Greater => LogValue::from_sign_ln(1, pos + ln_1m_exp(neg - pos)),
        Ordering::Less => LogValue::from_sign_ln(-1, neg + ln_1m_exp(pos - neg)),
    }
}
