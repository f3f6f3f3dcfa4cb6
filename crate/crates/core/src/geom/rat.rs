//! Arbitrary-precision rationals and their `"p/q"` string encoding.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serializer};

use crate::error::{Error, Result};

/// Exact rational scalar. `BigRational` keeps itself reduced with a positive
/// denominator after every operation.
pub type Rat = BigRational;

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

/// Exact binary expansion of a finite float.
pub fn from_f64(x: f64) -> Result<Rat> {
    Rat::from_float(x).ok_or_else(|| Error::InvalidInput(format!("non-finite float {x}")))
}

/// Rounds `x` to the nearest multiple of `1/denom`.
pub fn round_to(x: f64, denom: i64) -> Result<Rat> {
    if !x.is_finite() {
        return Err(Error::InvalidInput(format!("non-finite float {x}")));
    }
    let scaled = (x * denom as f64).round();
    let num = from_f64(scaled)?.to_integer();
    Ok(Rat::new(num, BigInt::from(denom)))
}

pub fn to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        if x.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Canonical `"p/q"` form, always with an explicit denominator.
pub fn format(x: &Rat) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Accepts `"p/q"` or a bare integer `"p"`.
pub fn parse(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Format(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Format(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(Rat::from_integer(p))
        }
    }
}

pub fn serialize<S: Serializer>(x: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format(x))
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rat, D::Error> {
    let s = String::deserialize(d)?;
    parse(&s).map_err(serde::de::Error::custom)
}
