//! Exact rational helpers on top of `BigRational`.
//!
//! Values are always normalised (lowest terms, positive denominator), so
//! structural equality is numeric equality and `Display` output is canonical:
//! `3/2`, `-1/4`, `7`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Error from [`parse_rational`]; carries the offending token.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError(pub String);

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational `{}`", self.0)
    }
}

impl std::error::Error for ParseRationalError {}

/// Parses `[-]digits[/digits]` with a nonzero denominator. Nothing else is
/// accepted: no `+`, no whitespace, no decimals.
pub fn parse_rational(s: &str) -> std::result::Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    if !digits(num) || den.is_some_and(|d| !digits(d)) {
        return Err(err());
    }
    let mut n: BigInt = num.parse().map_err(|_| err())?;
    if neg {
        n = -n;
    }
    let d: BigInt = match den {
        Some(d) => d.parse().map_err(|_| err())?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(n, d))
}

pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

/// Decimal approximation with `digits` places after the point, rounded half
/// away from zero. Computed exactly; never goes through floating point.
pub fn format_decimal(r: &Rational, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = r * Rational::from_integer(scale.clone());
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let rounded = if scaled.is_negative() {
        -((-scaled) + half).floor()
    } else {
        (scaled + half).floor()
    }
    .to_integer();
    let neg = rounded.is_negative();
    let mag = rounded.abs().to_string();
    let body = if digits == 0 {
        mag
    } else {
        let padded = format!("{:0>width$}", mag, width = digits + 1);
        let (ip, fp) = padded.split_at(padded.len() - digits);
        format!("{ip}.{fp}")
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

pub fn is_integral(r: &Rational) -> bool {
    r.denom().is_one()
}

pub fn floor(r: &Rational) -> BigInt {
    r.floor().to_integer()
}

pub fn ceil(r: &Rational) -> BigInt {
    r.ceil().to_integer()
}

/// Least common multiple of the denominators; 1 for an empty input.
pub fn lcm_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

pub(crate) fn to_i64(v: &BigInt) -> Result<i64> {
    v.to_i64().ok_or_else(|| Error::Overflow(v.to_string()))
}

/// Integral rational to `i64`.
pub(crate) fn rational_to_i64(r: &Rational) -> Result<i64> {
    debug_assert!(is_integral(r));
    to_i64(r.numer())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_grammar() {
        assert_eq!(parse_rational("3/2").unwrap(), frac(3, 2));
        assert_eq!(parse_rational("-6/4").unwrap(), frac(-3, 2));
        assert_eq!(parse_rational("0").unwrap(), int(0));
        assert_eq!(parse_rational("-0/5").unwrap(), int(0));
        for bad in ["", "-", "+1", "1/", "/2", "1/0", "1.5", " 1", "1/-2", "--1", "1/2/3"] {
            assert!(parse_rational(bad).is_err(), "{bad:?} should be rejected");
        }
    }

    #[test]
    fn canonical_output() {
        assert_eq!(format_rational(&frac(6, -4)), "-3/2");
        assert_eq!(format_rational(&frac(8, 4)), "2");
    }

    #[test]
    fn decimals() {
        assert_eq!(format_decimal(&frac(1, 3), 4), "0.3333");
        assert_eq!(format_decimal(&frac(-2, 3), 2), "-0.67");
        assert_eq!(format_decimal(&frac(3, 2), 0), "2");
        assert_eq!(format_decimal(&frac(-1, 200), 2), "-0.01");
        assert_eq!(format_decimal(&int(12), 1), "12.0");
    }

    #[test]
    fn floor_ceil_negative() {
        assert_eq!(floor(&frac(-1, 2)), BigInt::from(-1));
        assert_eq!(ceil(&frac(-1, 2)), BigInt::from(0));
        assert_eq!(ceil(&int(-1)), BigInt::from(-1));
    }

    #[test]
    fn lcm_of_denominators() {
        let v = [frac(3, 2), frac(1, 3), int(5)];
        assert_eq!(lcm_denominators(&v), BigInt::from(6));
        assert_eq!(lcm_denominators(&[]), BigInt::from(1));
    }
}
