//! Exact rational numbers in canonical form.
//!
//! Every measure value and every probability produced by this crate is a
//! [`Rational`]. Values are always reduced, carry a positive denominator, and
//! represent zero as `0/1`, so equality and hashing work on the canonical
//! form directly.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A reduced fraction with a positive denominator.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(Ratio<i64>);

impl Rational {
    pub const ZERO: Rational = Rational(Ratio::new_raw(0, 1));
    pub const ONE: Rational = Rational(Ratio::new_raw(1, 1));

    /// Builds `num/den` in canonical form.
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::ZeroDenominator);
        }
        Ok(Rational(Ratio::new(num, den)))
    }

    pub fn from_integer(value: i64) -> Self {
        Rational(Ratio::from_integer(value))
    }

    /// `count / total` for non-negative counts, reduced before narrowing so
    /// large but reducible fractions still fit.
    pub fn from_counts(count: u128, total: u128) -> Result<Self> {
        if total == 0 {
            return Err(Error::ZeroDenominator);
        }
        let g = count.gcd(&total).max(1);
        let (num, den) = (count / g, total / g);
        match (i64::try_from(num), i64::try_from(den)) {
            (Ok(num), Ok(den)) => Ok(Rational(Ratio::new_raw(num, den))),
            _ => Err(Error::Overflow(format!(
                "fraction {num}/{den} does not fit 64-bit rational"
            ))),
        }
    }

    /// Builds `num/den` from wide signed integers, reducing first.
    pub(crate) fn from_i128(num: i128, den: i128) -> Result<Self> {
        if den == 0 {
            return Err(Error::ZeroDenominator);
        }
        let g = num.gcd(&den).max(1);
        let (mut num, mut den) = (num / g, den / g);
        if den < 0 {
            num = -num;
            den = -den;
        }
        match (i64::try_from(num), i64::try_from(den)) {
            (Ok(num), Ok(den)) => Ok(Rational(Ratio::new_raw(num, den))),
            _ => Err(Error::Overflow(format!(
                "fraction {num}/{den} does not fit 64-bit rational"
            ))),
        }
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// `1 - self`.
    pub fn complement(&self) -> Self {
        Rational::ONE - *self
    }

    /// Returns the integer value when the fraction is whole.
    pub fn to_integer_exact(&self) -> Option<i64> {
        self.0.is_integer().then(|| self.numer())
    }

    /// `self * k` when it is an integer.
    pub fn scale_exact(&self, k: u64) -> Option<u64> {
        let den = self.denom() as i128;
        let prod = self.numer() as i128 * k as i128;
        (prod % den == 0)
            .then(|| prod / den)
            .and_then(|v| u64::try_from(v).ok())
    }

    /// Exact `floor(self * k)`.
    pub fn floor_mul(&self, k: i64) -> i64 {
        let prod = self.numer() as i128 * k as i128;
        Integer::div_floor(&prod, &(self.denom() as i128)) as i64
    }

    /// The exact square root, when `self` is the square of a rational.
    pub fn exact_sqrt(&self) -> Option<Rational> {
        if self.numer() < 0 {
            return None;
        }
        let n = self.numer().isqrt();
        let d = self.denom().isqrt();
        (n * n == self.numer() && d * d == self.denom()).then(|| Rational(Ratio::new_raw(n, d)))
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational(self.0 + rhs.0)
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        Rational(self.0 - rhs.0)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        Rational(self.0 * rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `num/den`, integers, and decimals such as `0.25`. Decimals are
    /// converted exactly.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadRatio(s.to_string());
        let t = s.trim();
        if let Some((num, den)) = t.split_once('/') {
            let num: i64 = num.trim().parse().map_err(|_| bad())?;
            let den: i64 = den.trim().parse().map_err(|_| bad())?;
            return Rational::new(num, den);
        }
        let (negative, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        let all_digits = |p: &str| p.bytes().all(|b| b.is_ascii_digit());
        if !all_digits(int_part) || !all_digits(frac_part) || frac_part.len() > 18 {
            return Err(bad());
        }
        let digits = format!("{int_part}{frac_part}");
        let num: i128 = digits.parse().map_err(|_| bad())?;
        let den = 10i128.pow(frac_part.len() as u32);
        let num = if negative { -num } else { num };
        Rational::from_i128(num, den).map_err(|_| bad())
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
