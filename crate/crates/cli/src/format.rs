//! JSON file formats for algebras and contraction families.
//!
//! Indices in files are 1-based; coefficients are exact rationals written as
//! strings (`"2"`, `"-1/3"`), never as JSON numbers.

use std::collections::BTreeSet;
use std::str::FromStr;

use casimir_core::contraction::{ContractionError, ContractionFamily};
use casimir_core::scalar_poly::{Rational, RationalFunction};
use casimir_core::LieAlgebra;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::parse_ratfunc;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("{source_name}: line {line}, column {column}: {message}")]
    Syntax {
        source_name: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{source_name}: {field}: {message}")]
    Field {
        source_name: String,
        field: String,
        message: String,
    },
    #[error("{source_name}: the family matrix is singular over Q(e)")]
    SingularFamily { source_name: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketRecord {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub dimension: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<String>>,
    #[serde(default)]
    pub brackets: Vec<BracketRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum FamilyFile {
    Diagonal { weights: Vec<i64> },
    Matrix { entries: Vec<Vec<String>> },
}

/// Parses `"p/q"` or `"p"`; no signs other than a leading `-`, no decimals.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    let body = s.strip_prefix('-').unwrap_or(s);
    let ok = match body.split_once('/') {
        Some((p, q)) => digits(p) && digits(q),
        None => digits(body),
    };
    if !ok {
        return Err(format!("`{s}` is not an integer or p/q fraction"));
    }
    if body.split_once('/').is_some_and(|(_, q)| q.bytes().all(|b| b == b'0')) {
        return Err(format!("`{s}` has a zero denominator"));
    }
    Rational::from_str(s).map_err(|e| format!("`{s}`: {e}"))
}

fn syntax(source_name: &str, e: serde_json::Error) -> FormatError {
    FormatError::Syntax {
        source_name: source_name.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

fn field(source_name: &str, field: impl Into<String>, message: impl Into<String>) -> FormatError {
    FormatError::Field {
        source_name: source_name.to_string(),
        field: field.into(),
        message: message.into(),
    }
}

impl AlgebraFile {
    pub fn from_algebra(alg: &LieAlgebra) -> Self {
        AlgebraFile {
            dimension: alg.dim(),
            basis: Some(alg.labels().to_vec()),
            brackets: alg
                .constants()
                .map(|(i, j, k, c)| BracketRecord {
                    i: i + 1,
                    j: j + 1,
                    k: k + 1,
                    coeff: c.to_string(),
                })
                .collect(),
        }
    }

    pub fn to_algebra(&self, source_name: &str) -> Result<LieAlgebra, FormatError> {
        let n = self.dimension;
        let mut alg = match &self.basis {
            Some(labels) => {
                if labels.len() != n {
                    return Err(field(
                        source_name,
                        "basis",
                        format!("{} labels for dimension {n}", labels.len()),
                    ));
                }
                LieAlgebra::with_labels(n, labels.clone()).expect("length checked")
            }
            None => LieAlgebra::new(n),
        };
        let mut seen = BTreeSet::new();
        for (idx, rec) in self.brackets.iter().enumerate() {
            let loc = format!("brackets[{idx}]");
            for (name, v) in [("i", rec.i), ("j", rec.j), ("k", rec.k)] {
                if v == 0 || v > n {
                    return Err(field(
                        source_name,
                        format!("{loc}.{name}"),
                        format!("index {v} outside 1..={n}"),
                    ));
                }
            }
            if rec.i >= rec.j {
                return Err(field(
                    source_name,
                    &loc,
                    format!("records need i < j, got i = {}, j = {}", rec.i, rec.j),
                ));
            }
            if !seen.insert((rec.i, rec.j, rec.k)) {
                return Err(field(
                    source_name,
                    &loc,
                    format!("duplicate record for (i, j, k) = ({}, {}, {})", rec.i, rec.j, rec.k),
                ));
            }
            let c = parse_rational(&rec.coeff).map_err(|m| field(source_name, format!("{loc}.coeff"), m))?;
            alg.add_constant(rec.i - 1, rec.j - 1, rec.k - 1, c)
                .map_err(|e| field(source_name, &loc, e.to_string()))?;
        }
        Ok(alg)
    }
}

pub fn parse_algebra(text: &str, source_name: &str) -> Result<LieAlgebra, FormatError> {
    let file: AlgebraFile = serde_json::from_str(text).map_err(|e| syntax(source_name, e))?;
    file.to_algebra(source_name)
}

/// Pretty JSON with a trailing newline.
pub fn emit_algebra(alg: &LieAlgebra) -> String {
    let mut s = serde_json::to_string_pretty(&AlgebraFile::from_algebra(alg)).expect("serializable");
    s.push('\n');
    s
}

impl FamilyFile {
    pub fn to_family(&self, source_name: &str) -> Result<ContractionFamily, FormatError> {
        match self {
            FamilyFile::Diagonal { weights } => Ok(ContractionFamily::diagonal(weights.clone())),
            FamilyFile::Matrix { entries } => {
                let n = entries.len();
                let mut m: Vec<Vec<RationalFunction>> = Vec::with_capacity(n);
                for (r, row) in entries.iter().enumerate() {
                    if row.len() != n {
                        return Err(field(
                            source_name,
                            format!("entries[{r}]"),
                            format!("row has {} entries, expected {n}", row.len()),
                        ));
                    }
                    let parsed = row
                        .iter()
                        .enumerate()
                        .map(|(c, s)| parse_ratfunc(s).map_err(|m| field(source_name, format!("entries[{r}][{c}]"), m)))
                        .collect::<Result<Vec<_>, _>>()?;
                    m.push(parsed);
                }
                ContractionFamily::from_matrix(m).map_err(|e| match e {
                    ContractionError::SingularFamily => FormatError::SingularFamily {
                        source_name: source_name.to_string(),
                    },
                    e => field(source_name, "entries", e.to_string()),
                })
            }
        }
    }
}

pub fn parse_family(text: &str, source_name: &str) -> Result<ContractionFamily, FormatError> {
    let file: FamilyFile = serde_json::from_str(text).map_err(|e| syntax(source_name, e))?;
    file.to_family(source_name)
}
