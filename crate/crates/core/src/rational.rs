//! Rational helpers shared by every module: text I/O and the small scalar
//! abstraction that lets the same evaluation code run exactly or in `f64`.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("malformed rational literal {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `n`, `-n`, `n/d` or `-n/d` (surrounding whitespace ignored).
pub fn parse_rational(text: &str) -> Result<BigRational, RationalParseError> {
    let s = text.trim();
    if s.is_empty() {
        return Err(RationalParseError::Empty);
    }
    let malformed = || RationalParseError::Malformed(text.to_string());
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (num_text, den_text) = match body.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (body, None),
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    if !digits(num_text) || den_text.is_some_and(|d| !digits(d)) {
        return Err(malformed());
    }
    let n: BigInt = num_text.parse().map_err(|_| malformed())?;
    let d: BigInt = match den_text {
        Some(d) => d.parse().map_err(|_| malformed())?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(RationalParseError::ZeroDenominator(text.to_string()));
    }
    let q = BigRational::new(n, d);
    Ok(if neg { -q } else { q })
}

/// `n` for integers, `n/d` otherwise; always in lowest terms.
pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // Huge numerators or denominators: fall back to a scaled division.
        let n = q.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = q.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn exact_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| BigRational::new(n, d))
}

/// Field operations needed by the evaluators; implemented for exact
/// rationals and for `f64`.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(q: &BigRational) -> Self;
}

impl Scalar for BigRational {
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
}

impl Scalar for f64 {
    fn from_rational(q: &BigRational) -> Self {
        to_f64(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("-3/6").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rational(" 4/ 9 ").unwrap(), ratio(4, 9));
        assert_eq!(parse_rational("+7").unwrap(), int(7));
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(parse_rational(""), Err(RationalParseError::Empty)));
        assert!(matches!(parse_rational("1/0"), Err(RationalParseError::ZeroDenominator(_))));
        for bad in ["x", "1/", "/2", "--1", "1.5", "1/-2", "- 1"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn format_round_trips() {
        for q in [int(0), int(-5), ratio(7, 3), ratio(-1, 36)] {
            assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
        }
        assert_eq!(format_rational(&ratio(-2, 4)), "-1/2");
    }

    #[test]
    fn exact_sqrt_detects_squares() {
        assert_eq!(exact_sqrt(&int(36)), Some(int(6)));
        assert_eq!(exact_sqrt(&ratio(4, 9)), Some(ratio(2, 3)));
        assert_eq!(exact_sqrt(&int(30)), None);
        assert_eq!(exact_sqrt(&int(-4)), None);
    }
}
