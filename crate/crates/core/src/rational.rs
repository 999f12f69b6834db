//! Exact rational scalars and points.
//!
//! [`Rational`] is an arbitrary-precision fraction kept in lowest terms with a
//! positive denominator. Its `Display` form is `p/q`, or `p` for integers, which
//! is also the accepted input syntax of [`parse_rational`].

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{CheckedDiv, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// A point of R^d with exact coordinates.
pub type Point = Vec<Rational>;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num/den`; panics on a zero denominator, so only use with literals.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn checked_div(a: &Rational, b: &Rational) -> Result<Rational> {
    a.checked_div(b).ok_or(Error::DivisionByZero)
}

pub fn sign(x: &Rational) -> Ordering {
    if x.is_zero() {
        Ordering::Equal
    } else if x.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Parses `p`, `-p` or `p/q` (surrounding whitespace allowed).
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Malformed(format!("not a rational number: {text:?}"));
    match text.split_once('/') {
        None => text.parse::<BigInt>().map(Rational::from_integer).map_err(|_| bad()),
        Some((num, den)) => {
            let num: BigInt = num.trim().parse().map_err(|_| bad())?;
            let den: BigInt = den.trim().parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(Error::DivisionByZero);
            }
            Ok(Rational::new(num, den))
        }
    }
}

/// Parses a comma-separated coordinate list such as `"1/2, -3"`.
pub fn parse_point(text: &str) -> Result<Point> {
    if text.trim().is_empty() {
        return Err(Error::Malformed("empty point".into()));
    }
    text.split(',').map(parse_rational).collect()
}

pub fn format_point(x: &[Rational]) -> String {
    x.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
}
