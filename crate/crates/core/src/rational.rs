//! Exact rational helpers shared by every module.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

pub use num_rational::BigRational as Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("malformed rational `{0}` (expected p or p/q)")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `p` or `p/q` with optional sign on `p`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let s = s.trim();
    let bad = || ParseRationalError::Malformed(s.to_string());
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let numeric = |t: &str, signed: bool| {
        let digits = if signed {
            t.strip_prefix('-')
                .or_else(|| t.strip_prefix('+'))
                .unwrap_or(t)
        } else {
            t
        };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !numeric(num, true) || !numeric(den, false) {
        return Err(bad());
    }
    let n: BigInt = num.parse().map_err(|_| bad())?;
    let d: BigInt = den.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(ParseRationalError::ZeroDenominator(s.to_string()));
    }
    Ok(Rational::new(n, d))
}

/// Always renders `p/q` in lowest terms, including integers (`5/1`).
pub struct PQ<'a>(pub &'a Rational);

impl fmt::Display for PQ<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

pub fn pq(r: &Rational) -> String {
    PQ(r).to_string()
}

/// `floor(sqrt(r))` for `r >= 0`, computed exactly.
///
/// For integer `n`, `n <= sqrt(r)` iff `n*n <= floor(r)`, so the integer square
/// root of the floor is the answer.
pub fn floor_sqrt(r: &Rational) -> BigInt {
    assert!(!r.is_negative(), "floor_sqrt of a negative value");
    r.floor().to_integer().sqrt()
}

pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}
