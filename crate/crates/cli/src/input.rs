//! The matrix-set input document.
//!
//! ```json
//! {"dimension": 2, "encoding": "rational", "matrices": [[["1", "1"], ["0", "1"]]]}
//! ```
//!
//! Entries are strings (JSON numbers are read from their literal text).
//! With `"rational"` encoding they are integers or `p/q`; with `"decimal"`
//! they are decimal literals such as `0.1` or `2.5e-3`. Every entry must be
//! nonnegative and every grid must be `dimension × dimension`.

use std::path::Path;

use jsr_core::{Matrix, MatrixSet, Scalar};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Encoding {
    #[default]
    Rational,
    Decimal,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub dimension: usize,
    pub matrices: Vec<Vec<Vec<Value>>>,
    #[serde(default)]
    pub encoding: Encoding,
}

impl InputDocument {
    /// Exact `p/q` document for a set.
    pub fn from_set(s: &MatrixSet) -> Self {
        let matrices = s
            .matrices()
            .iter()
            .map(|m| {
                m.rows()
                    .map(|r| r.iter().map(|x| Value::String(x.to_string())).collect())
                    .collect()
            })
            .collect();
        InputDocument {
            dimension: s.dim(),
            matrices,
            encoding: Encoding::Rational,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }
}

#[derive(Clone, Debug)]
pub struct LoadedInput {
    pub set: MatrixSet,
    /// Hex SHA-256 of the raw input bytes.
    pub digest: String,
    pub encoding: Encoding,
}

fn parse_entry(v: &Value, encoding: Encoding, at: (usize, usize, usize)) -> Result<Scalar, CliError> {
    let where_ = || format!("matrix {}, row {}, column {}", at.0 + 1, at.1 + 1, at.2 + 1);
    let text = match v {
        Value::String(s) => s.trim().to_string(),
        Value::Number(n) => n.to_string(),
        other => {
            return Err(CliError::Parse(format!(
                "{}: expected a string, found {other}",
                where_()
            )))
        }
    };
    let ok = match encoding {
        Encoding::Rational => !text.contains(['.', 'e', 'E']),
        Encoding::Decimal => !text.contains('/'),
    };
    if !ok {
        let enc = if encoding == Encoding::Rational {
            "rational"
        } else {
            "decimal"
        };
        return Err(CliError::Parse(format!(
            "{}: {text:?} is not a {enc} literal",
            where_()
        )));
    }
    text.parse::<Scalar>()
        .map_err(|e| CliError::Parse(format!("{}: {e}", where_())))
}

pub fn parse_input(bytes: &[u8]) -> Result<LoadedInput, CliError> {
    let doc: InputDocument = serde_json::from_slice(bytes).map_err(|e| CliError::Parse(e.to_string()))?;
    let d = doc.dimension;
    if d == 0 {
        return Err(CliError::Parse("dimension must be at least 1".into()));
    }
    if doc.matrices.is_empty() {
        return Err(CliError::Parse("at least one matrix is required".into()));
    }
    let mut matrices = Vec::with_capacity(doc.matrices.len());
    for (k, grid) in doc.matrices.iter().enumerate() {
        if grid.len() != d || grid.iter().any(|r| r.len() != d) {
            return Err(CliError::Parse(format!("matrix {} is not {d}×{d}", k + 1)));
        }
        let rows = grid
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, v)| parse_entry(v, doc.encoding, (k, i, j)))
                    .collect()
            })
            .collect::<Result<Vec<Vec<Scalar>>, _>>()?;
        matrices.push(Matrix::from_rows(rows)?);
    }
    Ok(LoadedInput {
        set: MatrixSet::new(matrices)?,
        digest: hex::encode(Sha256::digest(bytes)),
        encoding: doc.encoding,
    })
}

pub fn read_input(path: &Path) -> Result<LoadedInput, CliError> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_input(&bytes)
}
