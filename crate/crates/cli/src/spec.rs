//! Workbench spec files: a small JSON document whose keys seed the flags.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::CliError;

/// Every key is optional; a flag given on the command line wins.
#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct WorkbenchSpec {
    /// Largest object size in exhaustive checks.
    pub scope: Option<usize>,
    /// Class of small maps, e.g. `fiber:2`, `isos`, `projfiber:1,2`.
    pub class: Option<String>,
    /// Axiom ids for `check-axioms`, e.g. `["A1", "A4"]`.
    pub axioms: Option<Vec<String>>,
    /// Fiber sizes of a branching signature.
    pub sig: Option<Vec<usize>>,
    /// Fiber sizes of a representing map.
    pub representation: Option<Vec<usize>>,
    pub depth: Option<usize>,
    pub rank: Option<usize>,
    pub formulas: Option<Vec<String>>,
    /// Values of free variables, as set literals.
    pub env: Option<BTreeMap<String, String>>,
    /// Soft per-check limit in seconds.
    pub timeout: Option<f64>,
}

impl WorkbenchSpec {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e.to_string()))?;
        serde_json::from_str(&text).map_err(|e| CliError::Spec(e.to_string()))
    }
}
