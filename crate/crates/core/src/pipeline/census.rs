//! JSON-lines census records: one object per line with
//! `name`, `volume`, `inj_radius` and `lambda1_lower`.

use crate::geometry::BudgetLiteral;
use crate::interval::Bound;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::collections::HashSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct CensusError {
    pub line: usize,
    pub message: String,
}

/// Numbers are kept as the decimal text they were written in, so a budget
/// parsed from `1.39` encloses 1.39 exactly rather than its nearest double.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub name: String,
    pub volume: String,
    pub inj_radius: String,
    pub lambda1_lower: String,
    /// 1-based line number in the input.
    pub line: usize,
}

impl CensusRecord {
    pub fn budget_literal(&self) -> BudgetLiteral {
        BudgetLiteral { volume: self.volume.clone(), eps: self.inj_radius.clone(), delta: self.lambda1_lower.clone() }
    }
}

/// Records that parsed, in file order, and diagnostics for the lines that did not.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusParse {
    pub records: Vec<CensusRecord>,
    pub errors: Vec<CensusError>,
}

fn positive_field(obj: &serde_json::Map<String, Value>, key: &str) -> Result<String, String> {
    let text = match obj.get(key) {
        None => return Err(format!("missing field {key:?}")),
        Some(Value::Number(n)) => n.to_string(),
        Some(Value::String(s)) => s.trim().to_string(),
        Some(other) => return Err(format!("field {key:?} must be a number, got {other}")),
    };
    let b = Bound::from_decimal_str(&text).map_err(|e| format!("field {key:?}: {e}"))?;
    if !b.is_positive() {
        return Err(format!("field {key:?} must be positive, got {text}"));
    }
    Ok(text)
}

fn parse_line(line: &str) -> Result<(String, [String; 3]), String> {
    let v: Value = serde_json::from_str(line).map_err(|e| format!("invalid JSON: {e}"))?;
    let obj = v.as_object().ok_or("expected a JSON object")?;
    let name = match obj.get("name") {
        Some(Value::String(s)) if !s.is_empty() => s.clone(),
        Some(Value::String(_)) => return Err("empty name".into()),
        Some(_) => return Err("field \"name\" must be a string".into()),
        None => return Err("missing field \"name\"".into()),
    };
    let fields = [
        positive_field(obj, "volume")?,
        positive_field(obj, "inj_radius")?,
        positive_field(obj, "lambda1_lower")?,
    ];
    Ok((name, fields))
}

/// Parses every line; a bad line is reported and skipped. Blank lines are ignored.
pub fn parse_census(text: &str) -> CensusParse {
    let mut out = CensusParse::default();
    let mut seen = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let raw = raw.trim();
        if raw.is_empty() {
            continue;
        }
        match parse_line(raw) {
            Ok((name, [volume, inj_radius, lambda1_lower])) => {
                if !seen.insert(name.clone()) {
                    out.errors.push(CensusError { line, message: format!("duplicate name {name:?}") });
                    continue;
                }
                out.records.push(CensusRecord { name, volume, inj_radius, lambda1_lower, line });
            }
            Err(message) => out.errors.push(CensusError { line, message }),
        }
    }
    out
}
