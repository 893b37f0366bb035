//! JSON descriptor files.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{SpaceDescriptor, StructureConstants};
use crate::error::{EswError, Result};
use crate::scalar::Scalar;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DescriptorFile {
    name: String,
    r: usize,
    dims: Vec<u64>,
    killing: Vec<Scalar>,
    #[serde(default)]
    constants: Vec<ConstantEntry>,
    #[serde(default, skip_serializing_if = "is_zero")]
    trivial_dim: usize,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    notes: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstantEntry {
    triple: [usize; 3],
    value: Scalar,
}

fn is_zero(v: &usize) -> bool {
    *v == 0
}

/// Parses and validates a descriptor from JSON text.
pub fn parse_descriptor(text: &str) -> Result<SpaceDescriptor> {
    let file: DescriptorFile =
        serde_json::from_str(text).map_err(|e| EswError::Parse(e.to_string()))?;
    if file.r == 0 {
        return Err(EswError::validation("r", "must be positive"));
    }
    if file.dims.len() != file.r {
        return Err(EswError::validation(
            "dims",
            format!("length {} does not match r = {}", file.dims.len(), file.r),
        ));
    }
    let mut seen = BTreeSet::new();
    let mut constants = StructureConstants::new(file.r);
    for (idx, entry) in file.constants.iter().enumerate() {
        let [i, j, k] = entry.triple;
        if !seen.insert(entry.triple) {
            return Err(EswError::Parse(format!(
                "duplicate triple ({i},{j},{k}) in constants[{idx}]"
            )));
        }
        if !(i <= j && j <= k) {
            return Err(EswError::validation(
                format!("constants[{idx}].triple ({i},{j},{k})"),
                "indices must be sorted i <= j <= k",
            ));
        }
        constants.set(entry.triple, entry.value.clone()).map_err(|e| match e {
            EswError::Validation { field, message } => EswError::Validation {
                field: format!("constants[{idx}]: {field}"),
                message,
            },
            other => other,
        })?;
    }
    SpaceDescriptor::new(
        file.name,
        file.dims,
        file.killing,
        constants,
        file.trivial_dim,
        file.notes,
    )
}

/// Reads a descriptor file.
pub fn load_descriptor(path: impl AsRef<Path>) -> Result<SpaceDescriptor> {
    let text = std::fs::read_to_string(path.as_ref())
        .map_err(|e| EswError::Io(format!("{}: {e}", path.as_ref().display())))?;
    parse_descriptor(&text)
}

/// Serializes a descriptor; exact values are written as `"p/q"` strings.
pub fn to_json_string(space: &SpaceDescriptor) -> String {
    let file = DescriptorFile {
        name: space.name().to_string(),
        r: space.r(),
        dims: space.dims().to_vec(),
        killing: space.killing().to_vec(),
        constants: space
            .constants()
            .iter()
            .map(|(t, v)| ConstantEntry {
                triple: *t,
                value: v.clone(),
            })
            .collect(),
        trivial_dim: space.trivial_dim(),
        notes: space.notes().to_string(),
    };
    serde_json::to_string_pretty(&file).expect("descriptor serialization")
}

pub fn save_descriptor(space: &SpaceDescriptor, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, to_json_string(space) + "\n")?;
    Ok(())
}
