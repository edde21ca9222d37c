//! JSON instance files:
//!
//! ```json
//! {"sorts": {"A": [0, 1, 2]},
//!  "functions": [{"name": "p", "args": ["A", "A"], "image": "bool",
//!                 "table": [[0, 0, true], [0, 1, true]]}],
//!  "formula": "forall x in A (exists y in A (x != y & p(x, y)))"}
//! ```

use std::collections::BTreeMap;

use serde::Deserialize;
use thiserror::Error;

use super::formula::FolFormula;
use super::interp::{Atom, Image, InterpError, Interpretation};
use super::parse::{parse_fol, FolParseError};

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("invalid instance JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Interp(#[from] InterpError),
    #[error("function `{function}`: row {row} is empty")]
    EmptyRow { function: String, row: usize },
    #[error("formula: {0}")]
    Formula(#[from] FolParseError),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    sorts: BTreeMap<String, Vec<Atom>>,
    #[serde(default)]
    functions: Vec<RawFunction>,
    #[serde(default)]
    formula: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFunction {
    name: String,
    args: Vec<String>,
    image: String,
    #[serde(default)]
    table: Vec<Vec<Atom>>,
}

/// A parsed instance; `formula` is `None` when the file carries none.
#[derive(Debug, Clone)]
pub struct FolInstance {
    pub interp: Interpretation,
    pub formula: Option<FolFormula>,
}

pub fn load_fol_instance(text: &str) -> Result<FolInstance, InstanceError> {
    let raw: RawInstance = serde_json::from_str(text)?;
    let mut interp = Interpretation::new();
    for (name, elements) in raw.sorts {
        interp.add_sort(&name, elements)?;
    }
    for f in raw.functions {
        let image = if f.image == "bool" {
            Image::Bool
        } else {
            Image::Sort(f.image.clone())
        };
        let mut rows = Vec::with_capacity(f.table.len());
        for (i, mut row) in f.table.into_iter().enumerate() {
            let value = row.pop().ok_or_else(|| InstanceError::EmptyRow {
                function: f.name.clone(),
                row: i,
            })?;
            rows.push((row, value));
        }
        let args: Vec<&str> = f.args.iter().map(String::as_str).collect();
        interp.add_function(&f.name, &args, image, rows)?;
    }
    let formula = raw.formula.as_deref().map(parse_fol).transpose()?;
    Ok(FolInstance { interp, formula })
}
