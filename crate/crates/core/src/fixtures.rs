//! Reference values with citations, loaded from JSON.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::scalar::{Param, ScalarExpr};
use crate::symbol::Family;
use crate::Error;

pub const FIXTURE_SCHEMA: &str = "ncres-fixtures/1";

const BUILTIN: &str = include_str!("../fixtures/reference.json");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixtureEntry {
    pub expr: String,
    pub citation: String,
    pub quote: String,
    #[serde(default)]
    pub typo_suspect: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Restatements of the same quantity elsewhere in the source.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub variants: Vec<FixtureEntry>,
}

impl FixtureEntry {
    pub fn parsed(&self) -> Result<ScalarExpr, Error> {
        self.expr.parse::<ScalarExpr>().map_err(|e| Error::Fixture(format!("`{}`: {e}", self.expr)))
    }

    /// Parsed and rewritten into the engine's trace convention.
    pub fn normalized(&self) -> Result<ScalarExpr, Error> {
        Ok(normalize_trace_notation(&self.parsed()?))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fixtures {
    pub schema: String,
    /// family → case id (or "total") → entry
    pub families: BTreeMap<String, BTreeMap<String, FixtureEntry>>,
}

impl Fixtures {
    pub fn builtin() -> Self {
        Self::from_json(BUILTIN).expect("bundled fixtures are valid")
    }

    pub fn load(path: &Path) -> Result<Self, Error> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn from_json(s: &str) -> Result<Self, Error> {
        let f: Fixtures = serde_json::from_str(s).map_err(|e| Error::Fixture(e.to_string()))?;
        if f.schema != FIXTURE_SCHEMA {
            return Err(Error::Fixture(format!("unsupported schema `{}`", f.schema)));
        }
        for cases in f.families.values() {
            for e in cases.values() {
                e.parsed()?;
                for v in &e.variants {
                    v.parsed()?;
                }
            }
        }
        Ok(f)
    }

    pub fn entry(&self, family: Family, key: &str) -> Option<&FixtureEntry> {
        self.families.get(&family.to_string())?.get(key)
    }
}

/// The reference writes bundle traces as `dimF · trace[X]` where the engine
/// writes `Tr[X]`; drop one dimF from every monomial carrying a trace symbol.
pub fn normalize_trace_notation(e: &ScalarExpr) -> ScalarExpr {
    ScalarExpr::from_terms(e.terms().map(|(m, c)| {
        let d = m.exponent(Param::DimF);
        if m.traces().is_empty() || d < 1 {
            return (m.clone(), c.clone());
        }
        (m.with_exponent(Param::DimF, d - 1), c.clone())
    }))
}
