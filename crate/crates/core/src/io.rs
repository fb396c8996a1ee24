//! JSON interchange for matrices and well-signed matrices.
//!
//! A matrix is `{"n": 3, "rows": [[..], ..]}`. Entries are JSON numbers, or
//! strings `"p/q"` / `"p"` for exact rationals.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::gmatrix::WellSignedMatrix;
use crate::graph::Graph;
use crate::spectra::{RatSymMatrix, SymMatrix};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub n: usize,
    pub rows: Vec<Vec<Value>>,
}

fn parse_rational(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => {
            let s = s.trim();
            let (p, q) = s.split_once('/').unwrap_or((s, "1"));
            let p = BigInt::from_str(p.trim()).map_err(|_| Error::Invalid(format!("bad rational `{s}`")))?;
            let q = BigInt::from_str(q.trim()).map_err(|_| Error::Invalid(format!("bad rational `{s}`")))?;
            if q == BigInt::from(0) {
                return Err(Error::Invalid(format!("zero denominator in `{s}`")));
            }
            Ok(BigRational::new(p, q))
        }
        Value::Number(x) => {
            if let Some(i) = x.as_i64() {
                Ok(BigRational::from_integer(BigInt::from(i)))
            } else {
                let f = x.as_f64().ok_or_else(|| Error::Invalid(format!("bad number {x}")))?;
                BigRational::from_float(f).ok_or_else(|| Error::Invalid(format!("non-finite {f}")))
            }
        }
        other => Err(Error::Invalid(format!("matrix entry must be a number or \"p/q\", got {other}"))),
    }
}

fn parse_f64(v: &Value) -> Result<f64> {
    match v {
        Value::Number(x) => x.as_f64().ok_or_else(|| Error::Invalid(format!("bad number {x}"))),
        Value::String(_) => {
            let r = parse_rational(v)?;
            r.to_f64().ok_or_else(|| Error::Invalid(format!("rational {r} out of range")))
        }
        other => Err(Error::Invalid(format!("matrix entry must be a number or \"p/q\", got {other}"))),
    }
}

fn check_shape(m: &MatrixJson) -> Result<()> {
    if m.rows.len() != m.n {
        return Err(Error::DimensionMismatch {
            expected: m.n,
            found: m.rows.len(),
        });
    }
    if let Some(r) = m.rows.iter().find(|r| r.len() != m.n) {
        return Err(Error::DimensionMismatch {
            expected: m.n,
            found: r.len(),
        });
    }
    Ok(())
}

impl MatrixJson {
    pub fn to_f64(&self) -> Result<SymMatrix> {
        check_shape(self)?;
        let rows: Vec<Vec<f64>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(parse_f64).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        SymMatrix::from_rows(&rows)
    }

    /// Exact entries; floats convert exactly from their binary value.
    pub fn to_rational(&self) -> Result<RatSymMatrix> {
        check_shape(self)?;
        let rows: Vec<Vec<BigRational>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(parse_rational).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        for i in 0..self.n {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::Invalid(format!("matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(SymMatrix::from_fn(self.n, |i, j| rows[i][j].clone()))
    }

    pub fn from_f64(m: &SymMatrix) -> Self {
        MatrixJson {
            n: m.n(),
            rows: m
                .rows()
                .into_iter()
                .map(|r| r.into_iter().map(Value::from).collect())
                .collect(),
        }
    }

    pub fn from_rational(m: &RatSymMatrix) -> Self {
        MatrixJson {
            n: m.n(),
            rows: m
                .rows()
                .into_iter()
                .map(|r| r.into_iter().map(|x| Value::String(x.to_string())).collect())
                .collect(),
        }
    }
}

pub fn read_matrix(text: &str) -> Result<SymMatrix> {
    parse_json::<MatrixJson>(text)?.to_f64()
}

pub fn read_matrix_rational(text: &str) -> Result<RatSymMatrix> {
    parse_json::<MatrixJson>(text)?.to_rational()
}

pub fn read_graph(text: &str) -> Result<Graph> {
    parse_json(text)
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Invalid(format!("JSON: {e}")))
}

/// `{"graph": .., "matrix": .., "tol": ..}`; `tol` is informational.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WellSignedJson {
    pub graph: Graph,
    pub matrix: MatrixJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

impl WellSignedJson {
    pub fn from_matrix(m: &WellSignedMatrix, tol: Option<f64>) -> Self {
        WellSignedJson {
            graph: m.graph.clone(),
            matrix: MatrixJson::from_f64(&m.matrix),
            tol,
        }
    }

    pub fn to_matrix(&self) -> Result<WellSignedMatrix> {
        WellSignedMatrix::new(self.graph.clone(), self.matrix.to_f64()?)
    }
}

/// Serialize a list of symmetric matrices as nested row arrays.
pub fn serialize_sym_vec<S: Serializer>(ms: &[SymMatrix], s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(ms.len()))?;
    for m in ms {
        seq.serialize_element(&m.rows())?;
    }
    seq.end()
}
