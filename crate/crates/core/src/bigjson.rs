//! Serde adapters writing `BigUint` as plain JSON numbers of any size.

use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Number;

fn to_number<E: serde::ser::Error>(v: &BigUint) -> Result<Number, E> {
    Number::from_str(&v.to_string()).map_err(E::custom)
}

fn from_number<E: serde::de::Error>(n: Number) -> Result<BigUint, E> {
    BigUint::from_str(&n.to_string()).map_err(E::custom)
}

pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    to_number(v)?.serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
    from_number(Number::deserialize(d)?)
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(to_number)
            .collect::<Result<Vec<_>, _>>()?
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
        Vec::<Number>::deserialize(d)?
            .into_iter()
            .map(from_number)
            .collect()
    }
}

pub mod option {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref().map(to_number).transpose()?.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigUint>, D::Error> {
        Option::<Number>::deserialize(d)?
            .map(from_number)
            .transpose()
    }
}

pub mod option_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<Vec<BigUint>>, s: S) -> Result<S::Ok, S::Error> {
        v.as_ref()
            .map(|v| v.iter().map(to_number).collect::<Result<Vec<_>, _>>())
            .transpose()?
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<BigUint>>, D::Error> {
        Option::<Vec<Number>>::deserialize(d)?
            .map(|v| v.into_iter().map(from_number).collect())
            .transpose()
    }
}
