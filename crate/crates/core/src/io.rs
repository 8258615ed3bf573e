//! JSON wire formats.
//!
//! Complex numbers are `[re, im]`, matrices are arrays of rows.
//!
//! ```text
//! state:    {"dim": 2, "matrix": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]}
//! channel:  {"dim_in": 2, "dim_out": 2, "kraus": [matrix, ...]}
//!       or  {"choi": matrix}            (square channel, unit trace or trace dim_in)
//! cost:     {"n": 3, "e": [[0, 1, 2], [1, 0, 1], [2, 1, 0]]}
//! ```

use std::path::Path;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::config::TOL;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianMatrix};
use crate::quantum::{DensityMatrix, QuantumChannel};
use crate::sdp::{SolveStatus, TransportSolution};

pub type MatrixJson = Vec<Vec<Complex64>>;

pub fn matrix_to_json(m: &ComplexMatrix) -> MatrixJson {
    m.to_rows()
}

pub fn matrix_from_json(rows: &MatrixJson) -> Result<ComplexMatrix> {
    ComplexMatrix::from_rows(rows)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateJson {
    pub dim: usize,
    pub matrix: MatrixJson,
}

impl From<&DensityMatrix> for StateJson {
    fn from(rho: &DensityMatrix) -> Self {
        Self { dim: rho.dim(), matrix: matrix_to_json(rho.as_matrix()) }
    }
}

impl TryFrom<StateJson> for DensityMatrix {
    type Error = Error;
    fn try_from(s: StateJson) -> Result<Self> {
        let m = matrix_from_json(&s.matrix)?;
        if m.rows() != s.dim || m.cols() != s.dim {
            return Err(Error::DimensionMismatch(format!(
                "state declares dim {} but the matrix is {}x{}",
                s.dim,
                m.rows(),
                m.cols()
            )));
        }
        DensityMatrix::new(HermitianMatrix::new_checked(m, TOL.hermitian)?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChannelJson {
    Kraus { dim_in: usize, dim_out: usize, kraus: Vec<MatrixJson> },
    Choi { choi: MatrixJson },
}

impl From<&QuantumChannel> for ChannelJson {
    fn from(ch: &QuantumChannel) -> Self {
        Self::Kraus {
            dim_in: ch.dim_in(),
            dim_out: ch.dim_out(),
            kraus: ch.kraus().iter().map(matrix_to_json).collect(),
        }
    }
}

impl TryFrom<ChannelJson> for QuantumChannel {
    type Error = Error;
    fn try_from(c: ChannelJson) -> Result<Self> {
        match c {
            ChannelJson::Kraus { dim_in, dim_out, kraus } => {
                let ks = kraus.iter().map(matrix_from_json).collect::<Result<Vec<_>>>()?;
                if ks.iter().any(|k| k.rows() != dim_out || k.cols() != dim_in) {
                    return Err(Error::DimensionMismatch(format!("Kraus operators must be {dim_out}x{dim_in}")));
                }
                QuantumChannel::from_kraus(ks)
            }
            ChannelJson::Choi { choi } => {
                let m = matrix_from_json(&choi)?;
                let n = (m.rows() as f64).sqrt().round() as usize;
                if n * n != m.rows() || !m.is_square() {
                    return Err(Error::DimensionMismatch(format!(
                        "Choi matrix of shape {}x{} is not n^2 x n^2",
                        m.rows(),
                        m.cols()
                    )));
                }
                // Accept the unnormalized Choi operator as well.
                let tr = m.trace().re;
                let m = if (tr - n as f64).abs() < TOL.trace * n as f64 && n > 1 { m.scale(1.0 / n as f64) } else { m };
                let state = DensityMatrix::new(HermitianMatrix::new_checked(m, TOL.hermitian)?)?;
                QuantumChannel::from_choi(state, n, n)
            }
        }
    }
}

/// Serialized form of a [`TransportSolution`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolutionJson {
    pub value: f64,
    pub primal_value: f64,
    pub dual_value: f64,
    pub gap: f64,
    pub iterations: usize,
    pub status: SolveStatus,
    pub marginal_residual: f64,
    pub dual_min_eigenvalue: f64,
    pub coupling: MatrixJson,
    pub sigma_a: MatrixJson,
    pub sigma_b: MatrixJson,
}

impl From<&TransportSolution> for SolutionJson {
    fn from(s: &TransportSolution) -> Self {
        Self {
            value: s.value,
            primal_value: s.primal_value,
            dual_value: s.dual_value,
            gap: s.gap,
            iterations: s.iterations,
            status: s.status,
            marginal_residual: s.marginal_residual,
            dual_min_eigenvalue: s.dual_min_eigenvalue,
            coupling: matrix_to_json(s.coupling.as_matrix()),
            sigma_a: matrix_to_json(s.dual.sigma_a.as_matrix()),
            sigma_b: matrix_to_json(s.dual.sigma_b.as_matrix()),
        }
    }
}

/// Reads and parses a JSON file; parse errors keep serde's line and column.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn read_state(path: &Path) -> Result<DensityMatrix> {
    read_json::<StateJson>(path)?.try_into()
}

pub fn read_channel(path: &Path) -> Result<QuantumChannel> {
    read_json::<ChannelJson>(path)?.try_into()
}

pub fn state_from_str(text: &str) -> Result<DensityMatrix> {
    serde_json::from_str::<StateJson>(text)?.try_into()
}

pub fn channel_from_str(text: &str) -> Result<QuantumChannel> {
    serde_json::from_str::<ChannelJson>(text)?.try_into()
}
