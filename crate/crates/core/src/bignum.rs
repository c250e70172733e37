//! Decimal-string serde for big integers; plain JSON numbers are accepted on
//! input.

use num_bigint::BigUint;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serializer};

#[derive(Deserialize)]
#[serde(untagged)]
enum Raw {
    Num(u64),
    Str(String),
}

fn parse(raw: Raw) -> Result<BigUint, String> {
    match raw {
        Raw::Num(n) => Ok(BigUint::from(n)),
        Raw::Str(s) => s.trim().parse::<BigUint>().map_err(|e| format!("bad integer {s:?}: {e}")),
    }
}

pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
    parse(Raw::deserialize(d)?).map_err(D::Error::custom)
}

pub mod vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&x.to_string())?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
        Vec::<Raw>::deserialize(d)?.into_iter().map(|r| parse(r).map_err(D::Error::custom)).collect()
    }
}
