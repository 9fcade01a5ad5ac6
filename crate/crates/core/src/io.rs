//! The JSON space file: point labels, maximal consistent sets by label, and
//! an optional `origin` record.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;
use crate::space::{Origin, Space};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile {
    pub points: Vec<String>,
    pub maximal_consistent: Vec<Vec<String>>,
    #[serde(default)]
    pub origin: Origin,
}

impl SpaceFile {
    pub fn from_space(space: &Space) -> Self {
        SpaceFile {
            points: space.labels_of(&space.full()),
            maximal_consistent: space
                .maximal_consistent_sets()
                .iter()
                .map(|m| space.labels_of(m))
                .collect(),
            origin: space.origin().clone(),
        }
    }

    /// Resolves labels and validates. With `force`, a space violating the
    /// axioms is still returned; malformed structure is always an error.
    pub fn into_space(self, force: bool) -> Result<Space> {
        let skeleton = Space::from_parts(self.points.clone(), Vec::new(), Origin::Explicit)?;
        let maximal = self
            .maximal_consistent
            .iter()
            .map(|m| skeleton.subset(m))
            .collect::<Result<Vec<_>>>()?;
        if force {
            Space::from_parts(self.points, maximal, self.origin)
        } else {
            Space::new(self.points, maximal, self.origin)
        }
    }
}

pub fn parse_space(text: &str, force: bool) -> Result<Space> {
    let file: SpaceFile = serde_json::from_str(text)?;
    file.into_space(force)
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn space_to_json(space: &Space) -> String {
    to_pretty(&canonical_json(&SpaceFile::from_space(space)))
}

pub fn load_space(path: &Path, force: bool) -> Result<Space> {
    parse_space(&fs::read_to_string(path)?, force)
}

pub fn save_space(path: &Path, space: &Space) -> Result<()> {
    fs::write(path, space_to_json(space))?;
    Ok(())
}

/// Serializes with object keys sorted at every level, independent of how
/// `serde_json` orders maps.
pub fn canonical_json<T: Serialize>(value: &T) -> Value {
    fn sort(v: Value) -> Value {
        match v {
            Value::Object(map) => {
                let sorted: BTreeMap<String, Value> = map.into_iter().map(|(k, v)| (k, sort(v))).collect();
                Value::Object(sorted.into_iter().collect())
            }
            Value::Array(items) => Value::Array(items.into_iter().map(sort).collect()),
            other => other,
        }
    }
    sort(serde_json::to_value(value).expect("serializable value"))
}

pub fn to_pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
    s.push('\n');
    s
}
