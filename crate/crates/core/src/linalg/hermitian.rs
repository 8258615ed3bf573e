use num_complex::Complex64;

use super::eigen::{jacobi_eigenvalues, jacobi_eigh, EigenDecomposition};
use super::matrix::{ComplexMatrix, ZERO};
use crate::config::TOL;
use crate::error::{Error, Result};

/// Which factor of a bipartite space `A (x) B` is traced out.
///
/// Bipartite indices follow `i_A * d_B + i_B`: the A factor is the slow index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Square complex matrix with exact Hermitian symmetry.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    mat: ComplexMatrix,
}

impl HermitianMatrix {
    /// Symmetrizes `(m + m^dag) / 2`.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "Hermitian matrix must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        Ok(Self { mat: m.hermitian_part() })
    }

    /// Like [`HermitianMatrix::new`] but rejects inputs whose asymmetry exceeds `tol`.
    pub fn new_checked(m: ComplexMatrix, tol: f64) -> Result<Self> {
        if m.is_square() {
            let defect = m.hermitian_defect();
            if defect > tol {
                return Err(Error::InvalidArgument(format!("matrix deviates from Hermitian symmetry by {defect:e}")));
            }
        }
        Self::new(m)
    }

    /// Caller guarantees exact Hermitian symmetry.
    pub(crate) fn from_hermitian_unchecked(mat: ComplexMatrix) -> Self {
        debug_assert!(mat.is_square());
        Self { mat }
    }

    pub fn identity(n: usize) -> Self {
        Self { mat: ComplexMatrix::identity(n) }
    }

    pub fn zeros(n: usize) -> Self {
        Self { mat: ComplexMatrix::zeros(n, n) }
    }

    pub fn diag(values: &[f64]) -> Self {
        Self { mat: ComplexMatrix::diag_real(values) }
    }

    pub fn from_real(n: usize, entries: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real(n, n, entries)?)
    }

    /// Rank-one projector `|psi><psi|` (not normalized).
    pub fn projector(psi: &[Complex64]) -> Self {
        Self { mat: ComplexMatrix::outer(psi, psi) }.symmetrized()
    }

    fn symmetrized(self) -> Self {
        Self { mat: self.mat.hermitian_part() }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.mat[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.frobenius_norm()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { mat: &self.mat + &other.mat }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { mat: &self.mat - &other.mat }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { mat: self.mat.scale(s) }
    }

    /// Ordinary matrix product; generally not Hermitian.
    pub fn matmul(&self, other: &Self) -> ComplexMatrix {
        self.mat.matmul(&other.mat)
    }

    /// `Tr(self * other)`, real for Hermitian arguments.
    pub fn trace_product(&self, other: &Self) -> f64 {
        self.mat.trace_of_product(&other.mat).re
    }

    /// `u * self * u^dag`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Self {
        Self { mat: u.sandwich(&self.mat) }.symmetrized()
    }

    pub fn transpose(&self) -> Self {
        Self { mat: self.mat.transpose() }
    }

    /// Kronecker product; the result lives on `A (x) B` with `self` as the A factor.
    pub fn tensor(&self, b: &Self) -> Self {
        Self { mat: self.mat.kron(&b.mat) }
    }

    /// Partial trace over one factor of a `dims.0 * dims.1` dimensional space.
    pub fn partial_trace(&self, dims: (usize, usize), which: Subsystem) -> Result<Self> {
        Ok(Self { mat: partial_trace_matrix(&self.mat, dims, which)? }.symmetrized())
    }

    pub fn eigh(&self) -> Result<EigenDecomposition> {
        jacobi_eigh(&self.mat)
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        jacobi_eigenvalues(&self.mat)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigenvalues()?.first().copied().unwrap_or(0.0))
    }

    pub fn max_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigenvalues()?.last().copied().unwrap_or(0.0))
    }

    /// `min_eigenvalue >= -tol`.
    pub fn is_psd(&self, tol: f64) -> Result<bool> {
        Ok(self.min_eigenvalue()? >= -tol)
    }

    /// Sum of absolute eigenvalues.
    pub fn trace_norm(&self) -> Result<f64> {
        Ok(self.eigenvalues()?.iter().map(|l| l.abs()).sum())
    }

    /// Applies `f` to the spectrum.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Ok(Self { mat: self.eigh()?.reconstruct_with(f) }.symmetrized())
    }

    /// Pseudo-inverse square root: `lambda^{-1/2}` above `cutoff`, zero otherwise.
    pub fn psd_inverse_sqrt(&self, cutoff: f64) -> Result<Self> {
        let e = self.eigh()?;
        let lo = e.eigenvalues.first().copied().unwrap_or(0.0);
        if lo < -TOL.psd {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue: lo });
        }
        Ok(Self { mat: e.reconstruct_with(|l| if l > cutoff { 1.0 / l.sqrt() } else { 0.0 }) }.symmetrized())
    }

    pub fn psd_sqrt(&self) -> Result<Self> {
        let e = self.eigh()?;
        let lo = e.eigenvalues.first().copied().unwrap_or(0.0);
        if lo < -TOL.psd {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue: lo });
        }
        Ok(Self { mat: e.reconstruct_with(|l| l.max(0.0).sqrt()) }.symmetrized())
    }
}

/// Partial trace of an arbitrary (not necessarily Hermitian) bipartite operator.
pub fn partial_trace_matrix(m: &ComplexMatrix, (da, db): (usize, usize), which: Subsystem) -> Result<ComplexMatrix> {
    if !m.is_square() || m.rows() != da * db {
        return Err(Error::DimensionMismatch(format!(
            "partial trace of a {}x{} matrix over dims ({da}, {db})",
            m.rows(),
            m.cols()
        )));
    }
    let d = da * db;
    let data = m.data();
    Ok(match which {
        Subsystem::B => {
            let mut out = ComplexMatrix::zeros(da, da);
            for i in 0..da {
                for j in 0..da {
                    let mut s = ZERO;
                    for k in 0..db {
                        s += data[(i * db + k) * d + j * db + k];
                    }
                    out[(i, j)] = s;
                }
            }
            out
        }
        Subsystem::A => {
            let mut out = ComplexMatrix::zeros(db, db);
            for k in 0..db {
                for l in 0..db {
                    let mut s = ZERO;
                    for i in 0..da {
                        s += data[(i * db + k) * d + i * db + l];
                    }
                    out[(k, l)] = s;
                }
            }
            out
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma1() -> HermitianMatrix {
        HermitianMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    #[test]
    fn tensor_of_identities() {
        let i4 = HermitianMatrix::identity(2).tensor(&HermitianMatrix::identity(2));
        assert_eq!(i4, HermitianMatrix::identity(4));
    }

    #[test]
    fn tensor_of_projectors() {
        let p = HermitianMatrix::diag(&[1.0, 0.0]).tensor(&HermitianMatrix::diag(&[0.0, 1.0]));
        assert_eq!(p, HermitianMatrix::diag(&[0.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn sigma1_tensor_sigma1_flips_both_bits() {
        // |00> -> |11>
        let xx = sigma1().tensor(&sigma1());
        let ket00 = [Complex64::new(1.0, 0.0), ZERO, ZERO, ZERO];
        let out = xx.as_matrix().mul_vec(&ket00);
        assert_eq!(out, vec![ZERO, ZERO, ZERO, Complex64::new(1.0, 0.0)]);
    }

    #[test]
    fn partial_trace_rejects_bad_dims() {
        let m = HermitianMatrix::identity(6);
        assert!(m.partial_trace((2, 2), Subsystem::A).is_err());
        assert!(m.partial_trace((2, 3), Subsystem::A).is_ok());
    }

    #[test]
    fn singlet_marginals_are_maximally_mixed() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let psi = [ZERO, Complex64::new(h, 0.0), Complex64::new(-h, 0.0), ZERO];
        let rho = HermitianMatrix::projector(&psi);
        let half = HermitianMatrix::identity(2).scale(0.5);
        assert!(rho.partial_trace((2, 2), Subsystem::A).unwrap().sub(&half).frobenius_norm() < 1e-15);
        assert!(rho.partial_trace((2, 2), Subsystem::B).unwrap().sub(&half).frobenius_norm() < 1e-15);
    }

    #[test]
    fn eigh_of_pauli() {
        let ev = sigma1().eigenvalues().unwrap();
        assert!((ev[0] + 1.0).abs() < 1e-15 && (ev[1] - 1.0).abs() < 1e-15);
        assert_eq!(HermitianMatrix::diag(&[3.0, 1.0, 2.0]).eigenvalues().unwrap(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn min_eigenvalue_of_identity() {
        assert_eq!(HermitianMatrix::identity(5).min_eigenvalue().unwrap(), 1.0);
    }

    #[test]
    fn inverse_sqrt_examples() {
        let m = HermitianMatrix::identity(2).scale(4.0).psd_inverse_sqrt(TOL.inverse_sqrt_cutoff).unwrap();
        assert!(m.sub(&HermitianMatrix::identity(2).scale(0.5)).frobenius_norm() < 1e-15);
        let p = HermitianMatrix::diag(&[9.0, 0.0]).psd_inverse_sqrt(TOL.inverse_sqrt_cutoff).unwrap();
        assert!(p.sub(&HermitianMatrix::diag(&[1.0 / 3.0, 0.0])).frobenius_norm() < 1e-15);
        assert!(HermitianMatrix::diag(&[1.0, -1.0]).psd_inverse_sqrt(1e-12).is_err());
    }

    #[test]
    fn new_checked_rejects_asymmetry() {
        let m = ComplexMatrix::from_real(2, 2, &[1.0, 0.5, 0.0, 1.0]).unwrap();
        assert!(HermitianMatrix::new_checked(m.clone(), 1e-9).is_err());
        let h = HermitianMatrix::new(m).unwrap();
        assert_eq!(h.get(0, 1), Complex64::new(0.25, 0.0));
    }
}
