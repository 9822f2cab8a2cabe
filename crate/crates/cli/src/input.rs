//! Space description files.
//!
//! ```json
//! {"kind": "diagonal", "beta": ["1", "0.5", "0.5"]}
//! {"kind": "gram", "ambient_dim": 3,
//!  "basis": [[["1", "0"], ["0", "0"], ["0", "0"]], ...],
//!  "gram":  [[["1", "0"], ...], ...]}
//! ```
//!
//! Numbers are decimal strings; plain JSON numbers are accepted too.

use nalgebra::DMatrix;
use serde::Deserialize;
use subhardy::catalog::Space;
use subhardy::{CoeffVector, DiagonalSpace, GramSpace};

use crate::report::{Cplx, Real};
use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SpaceFile {
    Diagonal { beta: Vec<Real> },
    Gram { ambient_dim: usize, basis: Vec<Vec<Cplx>>, gram: Vec<Vec<Cplx>> },
}

pub fn parse(text: &str) -> Result<SpaceFile, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Input(format!("malformed space file: {e}")))
}

impl SpaceFile {
    pub fn build(&self) -> Result<Space, CliError> {
        match self {
            SpaceFile::Diagonal { beta } => {
                let beta = beta.iter().map(|r| r.0).collect();
                Ok(Space::Diagonal(DiagonalSpace::from_beta(beta)?))
            }
            SpaceFile::Gram { ambient_dim, basis, gram } => {
                let basis = basis
                    .iter()
                    .map(|row| {
                        if row.len() != *ambient_dim {
                            return Err(CliError::Input(format!(
                                "basis vector has {} coefficients, ambient_dim is {ambient_dim}",
                                row.len()
                            )));
                        }
                        Ok(CoeffVector::new(row.iter().map(|&c| c.into()).collect())?)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let g = gram_matrix(gram, basis.len())?;
                Ok(Space::Gram(GramSpace::new(*ambient_dim, basis, g)?))
            }
        }
    }
}

fn gram_matrix(rows: &[Vec<Cplx>], m: usize) -> Result<DMatrix<num_complex::Complex64>, CliError> {
    if rows.len() != m || rows.iter().any(|r| r.len() != m) {
        return Err(CliError::Input(format!("gram must be {m} x {m} to match the basis")));
    }
    Ok(DMatrix::from_fn(m, m, |i, j| rows[i][j].into()))
}
