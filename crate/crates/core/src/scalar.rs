//! Numeric backends for probability tables.
//!
//! Every table, measure and bound is generic over [`Scalar`], which is
//! implemented for exact [`Rational`] numbers and for `f64`. Rational
//! inputs stay rational end to end, so saturation and round-trip checks on
//! rational parameters are exact equalities. Irrational parameters such as
//! the Tsirelson violation go through the `f64` path.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Number type usable as a probability or distance.
pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Signed + Send + Sync + 'static
{
    /// `true` for exact arithmetic (all tolerances are zero).
    const EXACT: bool;

    fn from_ratio(numer: i64, denom: i64) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_ratio(n, 1)
    }

    fn to_f64(&self) -> f64;

    /// Allowed deviation of a column sum from one.
    fn sum_tolerance() -> Self;

    /// Entries may dip this far below zero from rounding.
    fn negativity_guard() -> Self;

    /// Slack used when comparing derived quantities (inequality chains,
    /// feasibility relations).
    fn compare_tolerance() -> Self;

    /// JSON encoding used by the model file format.
    fn to_json(&self) -> serde_json::Value;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        numer as f64 / denom as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn sum_tolerance() -> Self {
        1e-12
    }

    fn negativity_guard() -> Self {
        1e-15
    }

    fn compare_tolerance() -> Self {
        1e-12
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::from(*self)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_ratio(numer: i64, denom: i64) -> Self {
        Rational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn to_f64(&self) -> f64 {
        // BigRational::to_f64 handles huge numerators/denominators without
        // overflowing the intermediate conversion.
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn sum_tolerance() -> Self {
        Rational::zero()
    }

    fn negativity_guard() -> Self {
        Rational::zero()
    }

    fn compare_tolerance() -> Self {
        Rational::zero()
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(format_rational(self))
    }
}

pub(crate) fn max_of<T: Scalar>(a: &T, b: &T) -> T {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub(crate) fn min_of<T: Scalar>(a: &T, b: &T) -> T {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

/// `a <= b` up to the scalar's comparison tolerance.
pub(crate) fn le_tol<T: Scalar>(a: &T, b: &T) -> bool {
    a.clone() <= b.clone() + T::compare_tolerance()
}

/// Formats a rational as `p/q`, or `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q` or an integer literal into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(Rational::new(num, den))
}

/// A user-supplied number: exact when written as `p/q` or an integer,
/// floating point when written as a decimal.
#[derive(Clone, Debug, PartialEq)]
pub enum Number {
    Exact(Rational),
    Float(f64),
}

impl Number {
    pub fn to_f64(&self) -> f64 {
        match self {
            Number::Exact(r) => Scalar::to_f64(r),
            Number::Float(x) => *x,
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Number::Exact(r) => Some(r),
            Number::Float(_) => None,
        }
    }
}

impl FromStr for Number {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Ok(r) = parse_rational(s) {
            return Ok(Number::Exact(r));
        }
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .map(Number::Float)
            .ok_or_else(|| Error::Parse(format!("not a number: {s:?}")))
    }
}

impl Display for Number {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Number::Exact(r) => f.write_str(&format_rational(r)),
            Number::Float(x) => write!(f, "{x}"),
        }
    }
}

/// Formats a float with `sig` significant digits in the style of C's `%g`
/// (trailing zeros trimmed). Output is byte-stable for a given input.
pub fn format_sig(x: f64, sig: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", sig - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= sig as i32 {
        let mantissa = trim_zeros(mantissa);
        return format!("{mantissa}e{exp}");
    }
    let decimals = (sig as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_integers() {
        assert_eq!(parse_rational("3/7").unwrap(), Rational::from_ratio(3, 7));
        assert_eq!(parse_rational(" -2 ").unwrap(), Rational::from_int(-2));
        assert_eq!(parse_rational("4/8").unwrap(), Rational::from_ratio(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5").is_err());
    }

    #[test]
    fn number_distinguishes_exact_and_decimal() {
        assert_eq!(
            "1/5".parse::<Number>().unwrap(),
            Number::Exact(Rational::from_ratio(1, 5))
        );
        assert_eq!("0.2".parse::<Number>().unwrap(), Number::Float(0.2));
        assert!("abc".parse::<Number>().is_err());
        assert!("inf".parse::<Number>().is_err());
    }

    #[test]
    fn rational_formatting() {
        assert_eq!(format_rational(&Rational::from_ratio(6, 4)), "3/2");
        assert_eq!(format_rational(&Rational::from_int(0)), "0");
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_sig(0.0462738468534, 10), "0.04627384685");
        assert_eq!(format_sig(2.0, 10), "2");
        assert_eq!(format_sig(1.0 / 3.0, 10), "0.3333333333");
        assert_eq!(format_sig(1.5e-9, 10), "1.5e-9");
        assert_eq!(format_sig(-0.25, 10), "-0.25");
        assert_eq!(format_sig(12345678901.0, 10), "1.23456789e10");
    }
}
