//! JSON documents read and written by the commands.

use qleb::lebesgue::DensityMatrix;
use qleb::matcore::{CMat, HermitianMatrix, C64};
use qleb::ToleranceConfig;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

/// A square complex matrix with entries stored as `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDocument {
    pub dim: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl MatrixDocument {
    pub fn from_mat(m: &CMat) -> Self {
        let entries = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect();
        MatrixDocument { dim: m.nrows(), entries, label: None }
    }

    pub fn from_hermitian(h: &HermitianMatrix) -> Self {
        Self::from_mat(h.as_mat())
    }

    pub fn labelled(mut self, label: &str) -> Self {
        self.label = Some(label.to_string());
        self
    }

    pub fn to_mat(&self, what: &str) -> Result<CMat, CliError> {
        if self.dim == 0 {
            return Err(CliError::input(format!("{what}: dim must be positive")));
        }
        if self.entries.len() != self.dim || self.entries.iter().any(|r| r.len() != self.dim) {
            return Err(CliError::input(format!("{what}: entries must form a {0}x{0} array", self.dim)));
        }
        let mut m = CMat::zeros(self.dim, self.dim);
        for (i, row) in self.entries.iter().enumerate() {
            for (j, z) in row.iter().enumerate() {
                if !(z[0].is_finite() && z[1].is_finite()) {
                    return Err(CliError::input(format!("{what}: entry ({i}, {j}) is not finite")));
                }
                m[(i, j)] = C64::new(z[0], z[1]);
            }
        }
        Ok(m)
    }

    pub fn to_hermitian(&self, what: &str, tol: &ToleranceConfig) -> Result<HermitianMatrix, CliError> {
        HermitianMatrix::new(self.to_mat(what)?, tol).map_err(|e| CliError::input(format!("{what}: {e}")))
    }

    pub fn to_state(&self, what: &str, tol: &ToleranceConfig) -> Result<DensityMatrix, CliError> {
        DensityMatrix::new(self.to_hermitian(what, tol)?, tol).map_err(|e| CliError::input(format!("{what}: {e}")))
    }
}

pub fn read_json(path: &str) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("{path}: {e}")))
}

pub fn parse<T: serde::de::DeserializeOwned>(v: &Value, what: &str) -> Result<T, CliError> {
    T::deserialize(v).map_err(|e| CliError::input(format!("{what}: {e}")))
}

pub fn read_matrix(path: &str) -> Result<(MatrixDocument, Value), CliError> {
    let v = read_json(path)?;
    Ok((parse(&v, path)?, v))
}

pub fn complex(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

/// A query vector entry: a real number or an `[re, im]` pair.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl Entry {
    pub fn value(self) -> C64 {
        match self {
            Entry::Real(x) => C64::new(x, 0.0),
            Entry::Complex([re, im]) => C64::new(re, im),
        }
    }
}
