//! `Option<f64>` fields that TOML can spell out: a number, or the string
//! `"none"`. TOML has no null, so dropping the key would silently bring the
//! default back.

use serde::{Deserialize, Deserializer, Serializer};

pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_f64(*x),
        None => s.serialize_str("none"),
    }
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Num(f64),
        Int(i64),
        Text(String),
    }
    match Raw::deserialize(d)? {
        Raw::Num(x) => Ok(Some(x)),
        Raw::Int(i) => Ok(Some(i as f64)),
        Raw::Text(t) if t == "none" => Ok(None),
        Raw::Text(t) => Err(serde::de::Error::custom(format!(
            "expected a number or \"none\", got \"{t}\""
        ))),
    }
}
