//! Exact rational numbers and their canonical text form.
//!
//! Every quantity in the crate that is not an index or a count is a
//! [`Q`]. The text form is `p/q` in lowest terms with a positive
//! denominator; integers render without the `/1` suffix.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serializer};
use std::str::FromStr;

pub type Q = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed rational {0:?}")]
pub struct ParseRationalError(pub String);

/// `n/d` as an exact rational. Panics on `d == 0`.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `p`, `p/q`, `-p/q` (surrounding whitespace allowed).
pub fn parse_q(s: &str) -> Result<Q, ParseRationalError> {
    let t = s.trim();
    let err = || ParseRationalError(s.to_string());
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n = BigInt::from_str(num).map_err(|_| err())?;
    let d = BigInt::from_str(den).map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Q::new(n, d))
}

/// Canonical rendering: lowest terms, sign on the numerator, `/1` dropped.
pub fn render(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn to_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.numer().to_i64()
    } else {
        None
    }
}

pub fn to_f64(x: &Q) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

/// Exact `x^e` for a signed exponent. Panics if `x == 0` and `e < 0`.
pub fn pow(x: &Q, e: i64) -> Q {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

/// The rational `n`-th root of `x` if one exists (real, principal for odd `n`).
pub fn exact_root(x: &Q, n: u32) -> Option<Q> {
    if n == 0 {
        return None;
    }
    if x.is_zero() {
        return Some(Q::zero());
    }
    if x.is_negative() && n.is_multiple_of(2) {
        return None;
    }
    let num = int_root(&x.numer().abs(), n)?;
    let den = int_root(x.denom(), n)?;
    let r = Q::new(num, den);
    Some(if x.is_negative() { -r } else { r })
}

fn int_root(x: &BigInt, n: u32) -> Option<BigInt> {
    let r = x.nth_root(n);
    if num_traits::pow(r.clone(), n as usize) == *x {
        Some(r)
    } else {
        None
    }
}

pub fn is_one(x: &Q) -> bool {
    x.is_one()
}

/// serde adapter storing a [`Q`] as its canonical string.
pub mod as_string {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&render(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse_q(&s).map_err(serde::de::Error::custom)
    }
}

/// serde adapter for `Option<Q>`.
pub mod as_opt_string {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.serialize_some(&render(v)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
        let s = Option::<String>::deserialize(d)?;
        s.map(|s| parse_q(&s).map_err(serde::de::Error::custom))
            .transpose()
    }
}

/// serde adapter for maps from names to [`Q`].
pub mod map_as_string {
    use super::*;
    use serde::ser::SerializeMap;
    use std::collections::BTreeMap;

    pub fn serialize<S: Serializer>(m: &BTreeMap<String, Q>, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(m.len()))?;
        for (k, v) in m {
            map.serialize_entry(k, &render(v))?;
        }
        map.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<String, Q>, D::Error> {
        let raw = BTreeMap::<String, String>::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| {
                parse_q(&v)
                    .map(|q| (k, q))
                    .map_err(serde::de::Error::custom)
            })
            .collect()
    }
}
