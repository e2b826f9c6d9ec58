//! JSON input for the criteria checker.
//!
//! ```json
//! {
//!   "m": 1, "n": 2, "field": "complex",
//!   "a2": [[[[[1, 0]]], [[[0, 0]]]], [[[[0, 0]]], [[[1, 0]]]]],
//!   "a1": [[[[0, 2]]], [[[0, 0]]]],
//!   "a0": [[[0.9, 0]]]
//! }
//! ```
//!
//! `a2` is an n×n array of m×m matrices, `a1` an array of n matrices and
//! `a0` one matrix; `a1` and `a0` default to zero. Matrices are arrays of
//! rows. Complex entries are `[re, im]` pairs and plain numbers are read as
//! real. Instead of top-level matrices a document may carry
//! `"points": [{"x": [...], "a2": ..., "a1": ..., "a0": ...}, ...]`, one
//! coefficient set per sample point.

use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use super::system::{CMatrix, CoefficientSystem, ScalarField};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

type RawMatrix = Vec<Vec<Entry>>;

struct RawCoefficients {
    a2: Option<Vec<Vec<RawMatrix>>>,
    a1: Option<Vec<RawMatrix>>,
    a0: Option<RawMatrix>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPoint {
    x: Option<Vec<f64>>,
    a2: Option<Vec<Vec<RawMatrix>>>,
    a1: Option<Vec<RawMatrix>>,
    a0: Option<RawMatrix>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    m: usize,
    n: usize,
    field: ScalarField,
    a2: Option<Vec<Vec<RawMatrix>>>,
    a1: Option<Vec<RawMatrix>>,
    a0: Option<RawMatrix>,
    points: Option<Vec<RawPoint>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SamplePoint {
    pub x: Option<Vec<f64>>,
    pub system: CoefficientSystem,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriteriaDocument {
    pub m: usize,
    pub n: usize,
    pub field: ScalarField,
    pub points: Vec<SamplePoint>,
}

pub fn parse_criteria_file(path: &Path) -> Result<CriteriaDocument> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    parse_criteria_document(&text)
}

pub fn parse_criteria_document(text: &str) -> Result<CriteriaDocument> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawDocument = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::InvalidInput(format!("at `{path}`: {}", e.into_inner()))
    })?;
    let (m, n, field) = (raw.m, raw.n, raw.field);
    let points = match raw.points {
        Some(points) => {
            if raw.a2.is_some() || raw.a1.is_some() || raw.a0.is_some() {
                return Err(Error::InvalidInput(
                    "at `points`: top-level a2/a1/a0 cannot be combined with points".into(),
                ));
            }
            if points.is_empty() {
                return Err(Error::InvalidInput(
                    "at `points`: at least one point is required".into(),
                ));
            }
            points
                .into_iter()
                .enumerate()
                .map(|(i, p)| {
                    let prefix = format!("points[{i}]");
                    if let Some(x) = &p.x {
                        if x.len() != n {
                            return Err(Error::InvalidInput(format!(
                                "at `{prefix}.x`: expected {n} coordinates, got {}",
                                x.len()
                            )));
                        }
                    }
                    let coefficients = RawCoefficients {
                        a2: p.a2,
                        a1: p.a1,
                        a0: p.a0,
                    };
                    let system = build_system(m, n, field, coefficients, &format!("{prefix}."))?;
                    Ok(SamplePoint { x: p.x, system })
                })
                .collect::<Result<Vec<_>>>()?
        }
        None => {
            let coefficients = RawCoefficients {
                a2: raw.a2,
                a1: raw.a1,
                a0: raw.a0,
            };
            vec![SamplePoint {
                x: None,
                system: build_system(m, n, field, coefficients, "")?,
            }]
        }
    };
    Ok(CriteriaDocument {
        m,
        n,
        field,
        points,
    })
}

fn build_system(
    m: usize,
    n: usize,
    field: ScalarField,
    raw: RawCoefficients,
    prefix: &str,
) -> Result<CoefficientSystem> {
    let anchored = |field_path: String, msg: String| {
        Error::InvalidInput(format!("at `{prefix}{field_path}`: {msg}"))
    };
    let a2 = raw
        .a2
        .ok_or_else(|| anchored("a2".into(), "missing field".into()))?;
    if a2.len() != n {
        return Err(anchored(
            "a2".into(),
            format!("expected {n} rows of matrices, got {}", a2.len()),
        ));
    }
    let mut blocks = Vec::with_capacity(n);
    for (j, row) in a2.into_iter().enumerate() {
        if row.len() != n {
            return Err(anchored(
                format!("a2[{j}]"),
                format!("expected {n} matrices, got {}", row.len()),
            ));
        }
        let row = row
            .into_iter()
            .enumerate()
            .map(|(k, mat)| {
                to_matrix(mat, m, field).map_err(|msg| anchored(format!("a2[{j}][{k}]"), msg))
            })
            .collect::<Result<Vec<_>>>()?;
        blocks.push(row);
    }
    let a1 = match raw.a1 {
        Some(list) => {
            if list.len() != n {
                return Err(anchored(
                    "a1".into(),
                    format!("expected {n} matrices, got {}", list.len()),
                ));
            }
            list.into_iter()
                .enumerate()
                .map(|(j, mat)| {
                    to_matrix(mat, m, field).map_err(|msg| anchored(format!("a1[{j}]"), msg))
                })
                .collect::<Result<Vec<_>>>()?
        }
        None => vec![CMatrix::zeros(m, m); n],
    };
    let a0 = match raw.a0 {
        Some(mat) => to_matrix(mat, m, field).map_err(|msg| anchored("a0".into(), msg))?,
        None => CMatrix::zeros(m, m),
    };
    CoefficientSystem::new(m, n, field, blocks, a1, a0).map_err(|e| match e {
        Error::InvalidInput(msg) if !prefix.is_empty() => {
            Error::InvalidInput(format!("at `{prefix}`: {msg}"))
        }
        other => other,
    })
}

fn to_matrix(raw: RawMatrix, m: usize, field: ScalarField) -> std::result::Result<CMatrix, String> {
    if raw.len() != m {
        return Err(format!("expected {m} rows, got {}", raw.len()));
    }
    let mut mat = CMatrix::zeros(m, m);
    for (r, row) in raw.into_iter().enumerate() {
        if row.len() != m {
            return Err(format!("row {r}: expected {m} entries, got {}", row.len()));
        }
        for (c, entry) in row.into_iter().enumerate() {
            mat[(r, c)] = match (entry, field) {
                (Entry::Real(v), _) => Complex64::new(v, 0.0),
                (Entry::Complex([re, im]), ScalarField::Complex) => Complex64::new(re, im),
                (Entry::Complex(_), ScalarField::Real) => {
                    return Err(format!(
                        "entry ({r}, {c}) is a complex pair in a real system"
                    ));
                }
            };
        }
    }
    Ok(mat)
}
