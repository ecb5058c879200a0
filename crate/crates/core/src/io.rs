//! Self-describing JSON documents.
//!
//! Every file written by the CLI is a JSON object with a `"type"` field next
//! to the payload's own fields. Readers accept the tagged form and also the
//! bare payload. Index sets are written 1-based.

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("expected a document of type \"{expected}\", found \"{found}\"")]
    WrongType { expected: &'static str, found: String },
    #[error("expected a JSON object")]
    NotAnObject,
}

/// A payload type with its document tag.
pub trait Tagged: Serialize + DeserializeOwned {
    const TAG: &'static str;
}

macro_rules! tagged {
    ($($t:ty => $tag:literal),* $(,)?) => {
        $(impl Tagged for $t { const TAG: &'static str = $tag; })*
    };
}

tagged! {
    crate::moment::HyperpolygonPoint => "point",
    crate::gauge::GaugeElement => "gauge",
    crate::higgs::HiggsData => "higgs",
    crate::charts::ChartCoords => "chart",
    crate::minkowski::NullPolygon => "polygon",
    crate::kempf_ness::SolverReport => "solver-report",
    crate::involution::Classification => "involution",
    crate::involution::Census => "census",
    crate::minkowski::BendTrajectory => "trajectory",
    crate::verify::Report => "report",
}

/// Serializes `value` as a pretty-printed object carrying its `"type"` tag.
pub fn to_json<T: Tagged>(value: &T) -> Result<String, IoError> {
    let mut map = match serde_json::to_value(value)? {
        Value::Object(m) => m,
        _ => return Err(IoError::NotAnObject),
    };
    let mut out = Map::new();
    out.insert("type".into(), Value::String(T::TAG.into()));
    out.append(&mut map);
    Ok(serde_json::to_string_pretty(&Value::Object(out))? + "\n")
}

/// Parses a tagged or bare document of type `T`.
pub fn from_json<T: Tagged>(s: &str) -> Result<T, IoError> {
    let mut value: Value = serde_json::from_str(s)?;
    let Value::Object(map) = &mut value else { return Err(IoError::NotAnObject) };
    if let Some(tag) = map.remove("type") {
        let found = tag.as_str().unwrap_or_default();
        if found != T::TAG {
            return Err(IoError::WrongType { expected: T::TAG, found: found.to_string() });
        }
    }
    Ok(serde_json::from_value(value)?)
}

/// Serde adapters writing 0-based indices as 1-based numbers.
pub mod one_based {
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    fn shift_down<E: Error>(i: usize) -> Result<usize, E> {
        i.checked_sub(1).ok_or_else(|| E::custom("indices are 1-based"))
    }

    pub mod index {
        use super::*;

        pub fn serialize<S: Serializer>(i: &usize, s: S) -> Result<S::Ok, S::Error> {
            (i + 1).serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<usize, D::Error> {
            shift_down(usize::deserialize(d)?)
        }
    }

    pub mod indices {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[usize], s: S) -> Result<S::Ok, S::Error> {
            v.iter().map(|i| i + 1).collect::<Vec<_>>().serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<usize>, D::Error> {
            Vec::<usize>::deserialize(d)?.into_iter().map(shift_down).collect()
        }
    }

    pub mod index_sets {
        use super::*;

        pub fn serialize<S: Serializer>(v: &[Vec<usize>], s: S) -> Result<S::Ok, S::Error> {
            v.iter().map(|set| set.iter().map(|i| i + 1).collect::<Vec<_>>()).collect::<Vec<_>>().serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<usize>>, D::Error> {
            Vec::<Vec<usize>>::deserialize(d)?
                .into_iter()
                .map(|set| set.into_iter().map(shift_down).collect())
                .collect()
        }
    }

    pub mod pair {
        use super::*;

        pub fn serialize<S: Serializer>(v: &(usize, usize), s: S) -> Result<S::Ok, S::Error> {
            [v.0 + 1, v.1 + 1].serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(usize, usize), D::Error> {
            let [a, b] = <[usize; 2]>::deserialize(d)?;
            Ok((shift_down(a)?, shift_down(b)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moment::HyperpolygonPoint;

    #[test]
    fn tagged_round_trip() {
        let x = HyperpolygonPoint::p4();
        let s = to_json(&x).unwrap();
        assert!(s.contains("\"type\": \"point\""));
        assert_eq!(from_json::<HyperpolygonPoint>(&s).unwrap(), x);
        let bare = serde_json::to_string(&x).unwrap();
        assert_eq!(from_json::<HyperpolygonPoint>(&bare).unwrap(), x);
    }

    #[test]
    fn wrong_tag_is_rejected() {
        let s = to_json(&HyperpolygonPoint::p4()).unwrap().replace("\"point\"", "\"higgs\"");
        assert!(matches!(from_json::<HyperpolygonPoint>(&s), Err(IoError::WrongType { .. })));
        assert!(from_json::<HyperpolygonPoint>("[1, 2]").is_err());
        assert!(from_json::<HyperpolygonPoint>("{\"n\": 4}").is_err());
    }
}
