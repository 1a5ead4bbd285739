//! Exact rationals as `"p/q"` strings (`"n"` for integers) in serialized
//! output.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

use crate::poly::Q;

pub fn format_q(q: &Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Q::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Q::from_integer),
    }
}

pub mod q_str {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_q(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let raw = String::deserialize(d)?;
        parse_q(&raw).ok_or_else(|| D::Error::custom(format!("bad rational {raw:?}")))
    }
}

pub mod q_vec {
    use super::*;
    use serde::Serialize;

    pub fn serialize<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(format_q).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Q>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|r| parse_q(r).ok_or_else(|| D::Error::custom(format!("bad rational {r:?}"))))
            .collect()
    }
}

pub mod q_opt {
    use super::*;
    use serde::Serialize;

    pub fn serialize<S: Serializer>(v: &Option<Q>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(format_q).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Q>, D::Error> {
        match Option::<String>::deserialize(d)? {
            None => Ok(None),
            Some(r) => parse_q(&r)
                .map(Some)
                .ok_or_else(|| D::Error::custom(format!("bad rational {r:?}"))),
        }
    }
}
