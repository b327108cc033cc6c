//! Exact rational numbers used for every probability and every verdict.
//!
//! All arithmetic in this crate is performed on arbitrary-precision
//! rationals; there is no floating point anywhere on a verdict path.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

/// Shorthand constructor from an integer numerator/denominator pair.
///
/// Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    assert!(den != 0, "zero denominator");
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses a rational written as `"n"` or `"n/d"` (optionally signed).
///
/// Whitespace is not accepted; the denominator must be positive.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = match den {
        Some(d) => d.parse().ok()?,
        None => BigInt::one(),
    };
    if den.is_zero() || den.is_negative() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Formats a rational in lowest terms as `"n/d"`, omitting `/d` when the
/// denominator is 1. This is the canonical textual form used by system
/// files and JSON reports.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
