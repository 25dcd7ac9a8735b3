//! Exact rational scalars and their textual form.
//!
//! Every number that enters or leaves the library is a reduced fraction.
//! The text form is `p/q` (or just `p` when the denominator is one).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

pub type Q = BigRational;

/// `n/d` as an exact rational. Panics on `d == 0`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseQError(pub String);

impl fmt::Display for ParseQError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "not an exact rational: {:?}", self.0)
    }
}

impl std::error::Error for ParseQError {}

/// Parses `p`, `-p`, `p/q`. Surrounding whitespace is ignored.
pub fn parse_q(s: &str) -> Result<Q, ParseQError> {
    let t = s.trim();
    let err = || ParseQError(s.to_string());
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    if num.is_empty() || den.is_empty() {
        return Err(err());
    }
    let n: BigInt = num.parse().map_err(|_| err())?;
    let d: BigInt = den.parse().map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Q::new(n, d))
}

pub fn fmt_q(x: &Q) -> String {
    x.to_string()
}

/// Coefficient in front of a symbol: `""`, `"-"`, `"2"`, `"(7/12)"`, `"(-7/12)"`.
pub fn fmt_coeff_prefix(x: &Q) -> String {
    if x.is_one() {
        return String::new();
    }
    if (-x).is_one() {
        return "-".into();
    }
    if x.is_integer() {
        return x.to_string();
    }
    format!("({})", x)
}

/// Residue of an integral rational modulo `n` (returns the value itself when `n == 0`).
pub fn mod_residue(x: &Q, n: u64) -> Option<BigInt> {
    if !x.is_integer() {
        return None;
    }
    let v = x.to_integer();
    if n == 0 {
        return Some(v);
    }
    Some(v.mod_floor(&BigInt::from(n)))
}

/// Serde adapter: a `Q` stored as its `p/q` string.
pub mod qstr {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(serde::de::Error::custom)
    }
}
