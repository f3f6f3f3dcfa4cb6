//! Reading JSON inputs. Each list input is either a bare array or an object
//! carrying `"format": 1` and the list under a named key.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde_json::Value;

use kflats_core::geom::{Flat, Hyperplane, RVec};

pub fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn read<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let v = read_json(path)?;
    serde_json::from_value(v).with_context(|| format!("decoding {}", path.display()))
}

fn check_format(obj: &serde_json::Map<String, Value>) -> Result<()> {
    match obj.get("format") {
        Some(Value::Number(n)) if n.as_u64() == Some(1) => Ok(()),
        Some(other) => bail!("unsupported format {other}"),
        None => bail!("object input needs \"format\": 1"),
    }
}

/// The list under the first of `keys` present, or the value itself if it is an array.
fn list<T: DeserializeOwned>(v: Value, keys: &[&str]) -> Result<Vec<T>> {
    let items = match v {
        Value::Array(_) => v,
        Value::Object(mut obj) => {
            check_format(&obj)?;
            let Some(key) = keys.iter().find(|k| obj.contains_key(**k)) else {
                bail!("expected one of the keys {keys:?}");
            };
            obj.remove(*key).expect("key present")
        }
        _ => bail!("expected an array or an object"),
    };
    Ok(serde_json::from_value(items)?)
}

pub fn points(path: &Path) -> Result<Vec<RVec>> {
    list(read_json(path)?, &["points"]).with_context(|| format!("reading points from {}", path.display()))
}

pub fn hyperplanes(path: &Path) -> Result<Vec<Hyperplane>> {
    list(read_json(path)?, &["hyperplanes", "lines"]).with_context(|| format!("reading hyperplanes from {}", path.display()))
}

/// Flats, or hyperplanes converted to flats.
pub fn flats(path: &Path) -> Result<Vec<Flat>> {
    let v = read_json(path)?;
    let has_hyperplanes = match &v {
        Value::Object(obj) => !obj.contains_key("flats"),
        Value::Array(items) => items.first().and_then(Value::as_object).is_some_and(|o| o.contains_key("normal")),
        _ => false,
    };
    let res = if has_hyperplanes {
        list::<Hyperplane>(v, &["hyperplanes", "lines"]).map(|hs| hs.iter().map(Flat::from_hyperplane).collect())
    } else {
        list(v, &["flats"])
    };
    res.with_context(|| format!("reading flats from {}", path.display()))
}

/// The certificate itself, or the `certificate` field of a result object.
pub fn certificate(path: &Path) -> Result<Value> {
    let v = read_json(path)?;
    match v {
        Value::Object(mut obj) if obj.contains_key("certificate") => match obj.remove("certificate") {
            Some(Value::Null) | None => bail!("{} holds no certificate", path.display()),
            Some(c) => Ok(c),
        },
        v => Ok(v),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bare_and_wrapped_lists() {
        let bare: Vec<RVec> = list(serde_json::json!([["0", "1"], ["1/2", "3"]]), &["points"]).unwrap();
        let wrapped: Vec<RVec> = list(serde_json::json!({"format": 1, "points": [["0", "1"], ["1/2", "3"]]}), &["points"]).unwrap();
        assert_eq!(bare, wrapped);
        assert!(list::<RVec>(serde_json::json!({"format": 2, "points": []}), &["points"]).is_err());
        assert!(list::<RVec>(serde_json::json!({"points": []}), &["points"]).is_err());
        assert!(list::<RVec>(serde_json::json!("x"), &["points"]).is_err());
    }
}
