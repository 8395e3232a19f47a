//! Small helpers around [`BigRational`].

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn to_f64(q: &Rational) -> f64 {
    // Scale down huge operands first so the quotient stays finite.
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(900);
            let n = (q.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (q.denom() >> shift).to_f64().unwrap_or(1.0);
            if d == 0.0 {
                if q.is_negative() {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                }
            } else {
                n / d
            }
        }
    }
}

/// Floor of a rational as an integer.
pub fn floor(q: &Rational) -> BigInt {
    q.floor().to_integer()
}

pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

/// Exact rational `{num, den}` wire form. Integers that fit in an `i64` are
/// written as JSON numbers, larger ones as decimal strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WireRational(pub Rational);

fn int_to_json(n: &BigInt) -> serde_json::Value {
    match n.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::from(n.to_string()),
    }
}

impl Serialize for WireRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Rational", 2)?;
        s.serialize_field("num", &int_to_json(self.0.numer()))?;
        s.serialize_field("den", &int_to_json(self.0.denom()))?;
        s.end()
    }
}

fn int_from_json<E: de::Error>(v: &serde_json::Value) -> Result<BigInt, E> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| E::custom(format!("non-integral number {n}"))),
        serde_json::Value::String(s) => s
            .parse::<BigInt>()
            .map_err(|e| E::custom(format!("bad integer string {s:?}: {e}"))),
        other => Err(E::custom(format!("expected integer, got {other}"))),
    }
}

impl<'de> Deserialize<'de> for WireRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            num: serde_json::Value,
            den: serde_json::Value,
        }
        let raw = Raw::deserialize(deserializer)?;
        let num = int_from_json::<D::Error>(&raw.num)?;
        let den = int_from_json::<D::Error>(&raw.den)?;
        if den.is_zero() {
            return Err(de::Error::custom("zero denominator"));
        }
        Ok(WireRational(Rational::new(num, den)))
    }
}

/// Serde adapter for `Rational` fields.
pub mod wire {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        WireRational(q.clone()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        WireRational::deserialize(d).map(|w| w.0)
    }
}

/// Serde adapter for `Vec<Rational>` fields.
pub mod wire_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let wrapped: Vec<WireRational> = v.iter().cloned().map(WireRational).collect();
        wrapped.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<WireRational>::deserialize(d).map(|v| v.into_iter().map(|w| w.0).collect())
    }
}

/// Serde adapter for `Option<Vec<Rational>>` fields.
pub mod wire_opt_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<Vec<Rational>>, s: S) -> Result<S::Ok, S::Error> {
        let wrapped: Option<Vec<WireRational>> = v.as_ref().map(|v| v.iter().cloned().map(WireRational).collect());
        wrapped.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<Rational>>, D::Error> {
        Option::<Vec<WireRational>>::deserialize(d).map(|v| v.map(|v| v.into_iter().map(|w| w.0).collect()))
    }
}
