//! Scalar abstraction shared by every algorithm in the crate.
//!
//! Decision procedures compare probabilities with strict inequalities, so the
//! intended instantiation is [`BigRational`]. The float impls exist for
//! exploratory use and for the log-space geometry, which is approximate by
//! nature.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Natural logarithm, `-inf` at zero. Only meaningful for nonnegative values.
    fn ln_f64(&self) -> f64;

    fn to_f64(&self) -> f64;

    fn from_rational(r: &BigRational) -> Self;

    fn is_positive_value(&self) -> bool {
        *self > Self::zero()
    }
}

impl Scalar for BigRational {
    fn ln_f64(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        ln_bigint(self.numer()) - ln_bigint(self.denom())
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| self.ln_f64().exp())
    }

    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }
}

impl Scalar for f64 {
    fn ln_f64(&self) -> f64 {
        self.ln()
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_rational(r: &BigRational) -> Self {
        Scalar::to_f64(r)
    }
}

impl Scalar for f32 {
    fn ln_f64(&self) -> f64 {
        (*self as f64).ln()
    }

    fn to_f64(&self) -> f64 {
        *self as f64
    }

    fn from_rational(r: &BigRational) -> Self {
        Scalar::to_f64(r) as f32
    }
}

/// `ln |x|` for an arbitrary-size integer, accurate to about 1e-15 relative.
fn ln_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        if let Some(f) = x.abs().to_f64() {
            return f.ln();
        }
    }
    let shift = bits - 64;
    let top = (x.abs() >> shift).to_f64().unwrap_or(f64::NAN);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Parses `num/den` or a bare integer into a rational in lowest terms.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let bad = || Error::InvalidRational(text.to_string());
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let num: BigInt = num.trim().parse().map_err(|_| bad())?;
    let den: BigInt = den.trim().parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// Formats a rational as `num/den` in lowest terms, always with a denominator.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Decimal rendering with `digits` significant digits, truncated toward zero.
/// For human display only.
pub fn format_decimal(r: &BigRational, digits: usize) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let sign = if r.is_negative() { "-" } else { "" };
    let num = r.numer().magnitude().clone();
    let den = r.denom().magnitude().clone();
    let (int_part, mut rem) = num.div_rem(&den);
    let mut out = format!("{sign}{int_part}");
    let int_digits = if int_part.is_zero() {
        0
    } else {
        int_part.to_string().len()
    };
    if rem.is_zero() {
        return out;
    }
    out.push('.');
    let ten = BigUint::from(10u32);
    let mut significant = int_digits;
    let mut frac = String::new();
    while !rem.is_zero() && significant < digits {
        rem *= &ten;
        let (d, r2) = rem.div_rem(&den);
        rem = r2;
        let d = d.to_u32().unwrap_or(0);
        if significant > 0 || d != 0 {
            significant += 1;
        }
        frac.push(char::from_digit(d, 10).unwrap_or('0'));
    }
    out.push_str(&frac);
    out
}

pub(crate) fn rational_from_ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(
        BigInt::from_biguint(Sign::Plus, BigUint::from(num)),
        BigInt::from(den),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn parse_normalises() {
        assert_eq!(format_rational(&q("2/4")), "1/2");
        assert_eq!(format_rational(&q("3")), "3/1");
        assert_eq!(format_rational(&q("0/7")), "0/1");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a/2").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn ln_matches_float_for_small_values() {
        let r = q("3/7");
        assert!((r.ln_f64() - (3.0f64 / 7.0).ln()).abs() < 1e-14);
        assert_eq!(BigRational::zero().ln_f64(), f64::NEG_INFINITY);
    }

    #[test]
    fn ln_of_huge_denominator() {
        let den = BigInt::from(2).pow(5000u32);
        let r = BigRational::new(BigInt::from(1), den);
        let expected = -5000.0 * std::f64::consts::LN_2;
        assert!((r.ln_f64() - expected).abs() < 1e-9);
    }

    #[test]
    fn decimal_echo() {
        assert_eq!(format_decimal(&q("5/8"), 20), "0.625");
        assert_eq!(format_decimal(&q("1/3"), 5), "0.33333");
        assert_eq!(format_decimal(&q("3/2"), 20), "1.5");
        assert_eq!(format_decimal(&q("1/1"), 20), "1");
        assert_eq!(format_decimal(&q("1/300"), 3), "0.00333");
    }
}
