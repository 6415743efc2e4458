//! Exact rationals and the `"p/q"` text form used in catalogue files.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational {text:?}: {reason}")]
pub struct ParseRationalError {
    pub text: String,
    pub reason: &'static str,
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `"n"`, `"-n"` or `"p/q"`. Decimal points and exponents are rejected.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let err = |reason| ParseRationalError {
        text: text.to_string(),
        reason,
    };
    let t = text.trim();
    if t.is_empty() {
        return Err(err("empty"));
    }
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let parse_int = |s: &str| -> Result<BigInt, ParseRationalError> {
        let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err("expected an integer or p/q"));
        }
        s.parse::<BigInt>().map_err(|_| err("expected an integer or p/q"))
    };
    let p = parse_int(num)?;
    let q = match den {
        Some(d) => parse_int(d)?,
        None => BigInt::one(),
    };
    if q.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(Rational::new(p, q))
}

/// Canonical text: `"n"` for integers, `"p/q"` in lowest terms otherwise.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn to_i64(q: &Rational) -> Option<i64> {
    if !q.is_integer() {
        return None;
    }
    i64::try_from(q.numer()).ok()
}

/// Scales a vector by a positive rational so that it becomes a primitive
/// integer vector. The zero vector is returned unchanged.
pub fn primitive(v: &[Rational]) -> Vec<Rational> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter()
        .map(|x| Rational::from_integer(x / &g))
        .collect()
}

/// Primitive integer vector with the first nonzero coordinate positive.
/// Used for vectors whose sign carries no meaning (lineality directions).
pub fn primitive_unsigned(v: &[Rational]) -> Vec<Rational> {
    let mut p = primitive(v);
    if p.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        for x in &mut p {
            *x = -x.clone();
        }
    }
    p
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Serde adapter for a single rational stored as a string.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(de::Error::custom)
    }
}

/// A rational that (de)serializes as `"p/q"`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Q(pub Rational);

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serde_rational::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        serde_rational::deserialize(d).map(Q)
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}
