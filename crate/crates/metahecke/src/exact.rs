//! Exact numeric literals and their JSON encoding.
//!
//! Rationals serialize as JSON integers when integral and as `"p/q"` strings
//! otherwise. Floating-point literals are rejected on input.

use std::fmt;

use num::{BigInt, BigRational, One, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("not an exact rational literal: {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// Shorthand for the rational n/d. Panics on d = 0.
pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `"7"`, `"-3/4"` or `" 5 / 2 "`. Decimal points and exponents are
/// rejected.
pub fn parse_rational(s: &str) -> Result<BigRational, ExactError> {
    let t = s.trim();
    let bad = || ExactError::Malformed(s.to_string());
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let ok = |x: &str| {
        let digits = x.strip_prefix(['-', '+']).unwrap_or(x);
        !digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit())
    };
    if !ok(n) || !ok(d) {
        return Err(bad());
    }
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(ExactError::ZeroDenominator(s.to_string()));
    }
    Ok(BigRational::new(n, d))
}

pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"lo..hi"` (step 1/2) or a comma-separated list of rationals.
pub fn parse_grid(s: &str) -> Result<Vec<BigRational>, ExactError> {
    if let Some((lo, hi)) = s.split_once("..") {
        let lo = parse_rational_or_decimal(lo)?;
        let hi = parse_rational_or_decimal(hi)?;
        let step = q(1, 2);
        let mut out = Vec::new();
        let mut x = lo;
        while x <= hi {
            out.push(x.clone());
            x += &step;
        }
        return Ok(out);
    }
    s.split(',').map(parse_rational_or_decimal).collect()
}

/// Like [`parse_rational`] but additionally accepts terminating decimals such
/// as `0.5`, read exactly. Only used for command-line ranges.
pub fn parse_rational_or_decimal(s: &str) -> Result<BigRational, ExactError> {
    let t = s.trim();
    if let Some((int, frac)) = t.split_once('.') {
        let bad = || ExactError::Malformed(s.to_string());
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if !int_digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let whole: BigInt = format!(
            "{}{}",
            if int_digits.is_empty() {
                "0"
            } else {
                int_digits
            },
            frac
        )
        .parse()
        .map_err(|_| bad())?;
        let den = num::pow(BigInt::from(10), frac.len());
        let r = BigRational::new(whole, den);
        return Ok(if neg { -r } else { r });
    }
    parse_rational(t)
}

struct RatVisitor;

impl<'de> Visitor<'de> for RatVisitor {
    type Value = BigRational;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a \"p/q\" string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
        Ok(BigRational::from_integer(v.into()))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
        Ok(BigRational::from_integer(v.into()))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Self::Value, E> {
        Err(E::custom(format!(
            "floating-point literal {v} is not exact; write an integer or a \"p/q\" string"
        )))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
        parse_rational(v).map_err(E::custom)
    }
}

/// Serde adapter for a single `BigRational`.
pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        if r.denom().is_one() {
            if let Some(i) = r.numer().to_i64() {
                return s.serialize_i64(i);
            }
        }
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        d.deserialize_any(RatVisitor)
    }
}

/// Transparent wrapper used to (de)serialize rationals inside containers.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(pub BigRational);

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        rational::serialize(&self.0, s)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        rational::deserialize(d).map(Rat)
    }
}

pub mod rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        let w: Vec<Rat> = v.iter().cloned().map(Rat).collect();
        w.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        let w: Vec<Rat> = Vec::deserialize(d)?;
        Ok(w.into_iter().map(|r| r.0).collect())
    }
}

pub mod rational_opt {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
        v.clone().map(Rat).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRational>, D::Error> {
        let w: Option<Rat> = Option::deserialize(d)?;
        Ok(w.map(|r| r.0))
    }
}

/// Serde adapter for `BigInt`: a JSON integer when it fits in i64, a decimal
/// string otherwise.
pub mod bigint {
    use super::*;

    pub fn serialize<S: Serializer>(i: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        match i.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&i.to_string()),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let r = rational::deserialize(d)?;
        if !r.denom().is_one() {
            return Err(de::Error::custom("expected an integer"));
        }
        Ok(r.numer().clone())
    }
}
