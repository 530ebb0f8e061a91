//! Arbitrary-precision rational scalars and their text form.
//!
//! `BigRat` is always canonical: positive denominator, numerator and
//! denominator coprime. The crate-wide text form is `p/q` (plain `p` when the
//! denominator is one); both shapes are accepted on input.

use alloc::string::{String, ToString};
use core::fmt;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Zero};

pub type BigRat = num_rational::BigRational;

/// Shorthand for an integer rational.
pub fn rat_int(n: i64) -> BigRat {
    BigRat::from_integer(BigInt::from(n))
}

/// Shorthand for n/d.
pub fn rat(n: i64, d: i64) -> BigRat {
    BigRat::new(BigInt::from(n), BigInt::from(d))
}

/// Render as `p/q`, or plain `p` for integers.
pub fn rat_to_string(r: &BigRat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        let mut s = r.numer().to_string();
        s.push('/');
        s.push_str(&r.denom().to_string());
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseRatError {
    Empty,
    BadDigit,
    ZeroDenominator,
}

impl fmt::Display for ParseRatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseRatError::Empty => write!(f, "empty rational literal"),
            ParseRatError::BadDigit => write!(f, "malformed rational literal"),
            ParseRatError::ZeroDenominator => write!(f, "zero denominator"),
        }
    }
}

/// Parse `p`, `p/q`, or `-p/q` (ASCII digits, optional leading sign).
pub fn rat_from_str(text: &str) -> Result<BigRat, ParseRatError> {
    let t = text.trim();
    if t.is_empty() {
        return Err(ParseRatError::Empty);
    }
    let (num_text, den_text) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let num: BigInt = num_text.parse().map_err(|_| ParseRatError::BadDigit)?;
    let den: BigInt = match den_text {
        Some(d) => d.parse().map_err(|_| ParseRatError::BadDigit)?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(ParseRatError::ZeroDenominator);
    }
    Ok(BigRat::new(num, den))
}

/// Exact k-th root of an integer if one exists (negative inputs need odd k).
pub fn int_nth_root(n: &BigInt, k: u32) -> Option<BigInt> {
    assert!(k >= 1, "root index must be positive");
    if n.is_zero() {
        return Some(BigInt::zero());
    }
    if n.sign() == Sign::Minus {
        if k % 2 == 0 {
            return None;
        }
        return int_nth_root(&-n, k).map(|r| -r);
    }
    let r = n.nth_root(k);
    if num_traits::pow::Pow::pow(&r, k) == *n {
        Some(r)
    } else {
        None
    }
}

/// Exact k-th root of a rational if it is again rational.
pub fn rat_nth_root(r: &BigRat, k: u32) -> Option<BigRat> {
    let num = int_nth_root(r.numer(), k)?;
    let den = int_nth_root(r.denom(), k)?;
    Some(BigRat::new(num, den))
}

/// r^e for a rational r and integer e (negative e inverts; r must be nonzero then).
pub fn rat_pow_i64(r: &BigRat, e: i64) -> BigRat {
    if e == 0 {
        return BigRat::one();
    }
    let base = if e < 0 {
        assert!(!r.is_zero(), "zero base with negative exponent");
        r.recip()
    } else {
        r.clone()
    };
    let mut acc = BigRat::one();
    for _ in 0..e.unsigned_abs() {
        acc *= &base;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_text() {
        for (txt, canon) in [("3", "3"), ("-27/98", "-27/98"), ("4/6", "2/3"), ("-4/-6", "2/3")] {
            let r = rat_from_str(txt).unwrap();
            assert_eq!(rat_to_string(&r), canon);
            assert_eq!(rat_from_str(&rat_to_string(&r)).unwrap(), r);
        }
    }

    #[test]
    fn rejects_bad_literals() {
        assert!(rat_from_str("").is_err());
        assert!(rat_from_str("x").is_err());
        assert!(rat_from_str("1/0").is_err());
    }

    #[test]
    fn integer_roots() {
        assert_eq!(int_nth_root(&BigInt::from(729), 3), Some(BigInt::from(9)));
        assert_eq!(int_nth_root(&BigInt::from(-8), 3), Some(BigInt::from(-2)));
        assert_eq!(int_nth_root(&BigInt::from(-4), 2), None);
        assert_eq!(int_nth_root(&BigInt::from(9), 8), None);
        assert_eq!(rat_nth_root(&rat(4, 9), 2), Some(rat(2, 3)));
        assert_eq!(rat_nth_root(&rat(2, 3), 2), None);
    }
}
