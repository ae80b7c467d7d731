//! Exact rational scalars.
//!
//! Every coefficient in this crate is a [`Rational`]: arbitrary-precision,
//! always in lowest terms, positive denominator. There is no floating point
//! anywhere in the crate, so every rank, kernel and verdict is exact.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// Integer as a rational.
pub fn rat(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// `numer/denom` as a rational. Panics if `denom == 0`.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Canonical text form: `p` when the denominator is 1, otherwise `p/q`.
///
/// This is the serialization used in reports and in the file grammar, and
/// [`parse_rational`] is its inverse.
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Parses `p` or `p/q` with `q > 0`. Returns `None` on any other shape.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        None => text.parse::<BigInt>().ok().map(Rational::from_integer),
        Some((num, den)) => {
            let num = num.trim().parse::<BigInt>().ok()?;
            let den = den.trim().parse::<BigInt>().ok()?;
            if den.is_positive() {
                Some(Rational::new(num, den))
            } else {
                None
            }
        }
    }
}

/// `value!`, used for the `Λᵏ(Π)` normalization `ωᵐ/m!`.
pub fn factorial(value: usize) -> Rational {
    let mut acc = BigInt::one();
    for i in 2..=value {
        acc *= BigInt::from(i);
    }
    Rational::from_integer(acc)
}

pub fn is_zero(value: &Rational) -> bool {
    value.is_zero()
}
