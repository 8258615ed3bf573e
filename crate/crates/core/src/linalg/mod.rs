//! Dense complex linear algebra for the small Hermitian matrices used
//! throughout the crate (dimension at most a few dozen).

mod cholesky;
mod eigen;
mod hermitian;
mod matrix;
mod tridiagonal;

pub use cholesky::{cholesky, lower_inverse};
pub(crate) use cholesky::{cholesky_real, cholesky_real_solve};
pub use eigen::{jacobi_eigenvalues, jacobi_eigh, EigenDecomposition};
pub use hermitian::{partial_trace_matrix, HermitianMatrix, Subsystem};
pub use matrix::ComplexMatrix;
pub(crate) use matrix::ZERO;
pub use tridiagonal::{fast_eigenvalues, fast_eigh};

use crate::error::Result;

/// Kronecker product `a (x) b`.
pub fn tensor(a: &HermitianMatrix, b: &HermitianMatrix) -> HermitianMatrix {
    a.tensor(b)
}

/// `Tr_B m` for `which = B` (dimension `dims.0`), `Tr_A m` for `which = A` (dimension `dims.1`).
pub fn partial_trace(m: &HermitianMatrix, dims: (usize, usize), which: Subsystem) -> Result<HermitianMatrix> {
    m.partial_trace(dims, which)
}

pub fn eigh(m: &HermitianMatrix) -> Result<EigenDecomposition> {
    m.eigh()
}

pub fn min_eigenvalue(m: &HermitianMatrix) -> Result<f64> {
    m.min_eigenvalue()
}

/// PSD test at the crate-wide tolerance.
pub fn psd(m: &HermitianMatrix) -> Result<bool> {
    m.is_psd(crate::config::TOL.psd)
}

pub fn psd_inverse_sqrt(m: &HermitianMatrix, cutoff: f64) -> Result<HermitianMatrix> {
    m.psd_inverse_sqrt(cutoff)
}
