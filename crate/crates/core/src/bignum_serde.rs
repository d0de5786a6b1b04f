//! Serde adapters writing `BigUint` as a JSON number when it fits in a
//! `u64` and as a decimal string otherwise.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::de::{self, Deserializer, Visitor};
use serde::Serializer;

pub fn serialize<S: Serializer>(n: &BigUint, ser: S) -> Result<S::Ok, S::Error> {
    match n.to_u64() {
        Some(v) => ser.serialize_u64(v),
        None => ser.serialize_str(&n.to_string()),
    }
}

pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BigUint, D::Error> {
    struct V;
    impl Visitor<'_> for V {
        type Value = BigUint;
        fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
            f.write_str("a non-negative integer or decimal string")
        }
        fn visit_u64<E: de::Error>(self, v: u64) -> Result<BigUint, E> {
            Ok(BigUint::from(v))
        }
        fn visit_str<E: de::Error>(self, v: &str) -> Result<BigUint, E> {
            v.parse().map_err(E::custom)
        }
    }
    de.deserialize_any(V)
}

pub mod vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[BigUint], ser: S) -> Result<S::Ok, S::Error> {
        struct W<'a>(&'a BigUint);
        impl serde::Serialize for W<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                super::serialize(self.0, s)
            }
        }
        let mut seq = ser.serialize_seq(Some(v.len()))?;
        for n in v {
            seq.serialize_element(&W(n))?;
        }
        seq.end()
    }
}

pub mod opt {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<BigUint>, ser: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(n) => super::serialize(n, ser),
            None => ser.serialize_none(),
        }
    }
}
