//! Exact rational scalars and their text form.
//!
//! Rationals are serialized as `"7"`, `"-7"`, or `"p/q"` with `q > 0`; that
//! string form is used by every JSON emitter in the crate so that round-trips
//! are bit-exact.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::str::FromStr;

use crate::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational from a numerator/denominator pair. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Canonical text form: `"p"` when the denominator is 1, else `"p/q"`.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses the canonical text form. The denominator, when present, must be
/// positive; the reduced value is returned.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::BadRational(s.to_string());
    match s.split_once('/') {
        None => {
            let n = BigInt::from_str(s.trim()).map_err(|_| bad())?;
            Ok(Rational::from_integer(n))
        }
        Some((num, den)) => {
            let n = BigInt::from_str(num.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(den.trim()).map_err(|_| bad())?;
            if d.is_zero() || d.is_negative() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
    }
}
