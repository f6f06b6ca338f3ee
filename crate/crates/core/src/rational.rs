//! Exact rational arithmetic helpers.
//!
//! All quantities in this crate (cut positions, masses, densities,
//! certificates) are arbitrary-precision rationals. The canonical text form
//! is `"p/q"` with `q` omitted when it equals 1, e.g. `"2/3"`, `"-1/4"`,
//! `"0"`. That form is used in every JSON interface.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Rational from an integer pair; panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(num: i64) -> Rational {
    BigRational::from_integer(BigInt::from(num))
}

/// Parses `"p/q"` or `"p"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = |reason: &str| Error::InvalidInput(format!("cannot parse rational {s:?}: {reason}"));
    let (num_s, den_s) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (s, None),
    };
    let num: BigInt = num_s.parse().map_err(|_| bad("bad numerator"))?;
    let den: BigInt = match den_s {
        Some(d) => d.parse().map_err(|_| bad("bad denominator"))?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(bad("zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

/// Canonical text form: reduced, `"p/q"`, denominator omitted when 1.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn abs(r: &Rational) -> Rational {
    if r.is_negative() {
        -r.clone()
    } else {
        r.clone()
    }
}

/// Sign as -1, 0, or +1.
pub fn sign(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Mean of a nonempty slice.
pub fn mean(values: &[Rational]) -> Rational {
    let sum: Rational = values.iter().cloned().fold(Rational::zero(), |a, b| a + b);
    sum / rat_int(values.len() as i64)
}
