use num_complex::Complex64;

use crate::config::TOL;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianMatrix};

/// Unit-trace positive semidefinite Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: HermitianMatrix,
}

impl DensityMatrix {
    /// Validates trace (within `TOL.trace`) and positivity (within `TOL.psd`).
    pub fn new(mat: HermitianMatrix) -> Result<Self> {
        Self::with_tolerance(mat, TOL.trace, TOL.psd)
    }

    pub fn with_tolerance(mat: HermitianMatrix, trace_tol: f64, psd_tol: f64) -> Result<Self> {
        let tr = mat.trace();
        if !tr.is_finite() || (tr - 1.0).abs() > trace_tol {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let lo = mat.min_eigenvalue()?;
        if lo < -psd_tol {
            return Err(Error::InvalidState(format!("minimum eigenvalue {lo:e} is negative")));
        }
        Ok(Self { mat })
    }

    /// Divides by the trace first; still rejects non-PSD input.
    pub fn normalized(mat: HermitianMatrix) -> Result<Self> {
        let tr = mat.trace();
        if !(tr > 0.0) || !tr.is_finite() {
            return Err(Error::InvalidState(format!("cannot normalize matrix with trace {tr}")));
        }
        Self::new(mat.scale(1.0 / tr))
    }

    pub(crate) fn from_trusted(mat: HermitianMatrix) -> Self {
        Self { mat }
    }

    /// `|psi><psi| / <psi|psi>`.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm2: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if !(norm2 > 0.0) {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        Ok(Self { mat: HermitianMatrix::projector(psi).scale(1.0 / norm2) })
    }

    /// Computational basis state `|k><k|`.
    pub fn basis(n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(Error::InvalidArgument(format!("basis index {k} out of range for dim {n}")));
        }
        let mut d = vec![0.0; n];
        d[k] = 1.0;
        Ok(Self { mat: HermitianMatrix::diag(&d) })
    }

    pub fn maximally_mixed(n: usize) -> Self {
        Self { mat: HermitianMatrix::identity(n).scale(1.0 / n as f64) }
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.mat
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        self.mat.as_matrix()
    }

    pub fn into_hermitian(self) -> HermitianMatrix {
        self.mat
    }

    pub fn purity(&self) -> f64 {
        self.mat.trace_product(&self.mat)
    }

    /// `U rho U^dag`.
    pub fn conjugate_by(&self, u: &ComplexMatrix) -> Self {
        Self { mat: self.mat.conjugate_by(u) }
    }

    /// `p * self + (1 - p) * other`.
    pub fn mix(&self, other: &Self, p: f64) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch("mixing states of different dimension".into()));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!("mixing weight {p} outside [0, 1]")));
        }
        Ok(Self { mat: self.mat.scale(p).add(&other.mat.scale(1.0 - p)) })
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self { mat: self.mat.tensor(&other.mat) }
    }
}

/// Point `rho(r, theta) = (1 + (2r - 1)(sin(theta) s1 + cos(theta) s3)) / 2` on the
/// real slice of the Bloch ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochState {
    pub r: f64,
    pub theta: f64,
}

impl BlochState {
    pub fn new(r: f64, theta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&r) {
            return Err(Error::OutsideBlochBall { r });
        }
        if !theta.is_finite() {
            return Err(Error::InvalidArgument(format!("theta = {theta}")));
        }
        Ok(Self { r, theta })
    }

    /// Bloch vector `(x, z)`; the `y` component is zero on this slice.
    pub fn bloch_vector(&self) -> (f64, f64) {
        let k = 2.0 * self.r - 1.0;
        (k * self.theta.sin(), k * self.theta.cos())
    }

    pub fn to_density(&self) -> DensityMatrix {
        let (x, z) = self.bloch_vector();
        let m = ComplexMatrix::from_real(2, 2, &[0.5 * (1.0 + z), 0.5 * x, 0.5 * x, 0.5 * (1.0 - z)]).expect("2x2");
        DensityMatrix::from_trusted(HermitianMatrix::from_hermitian_unchecked(m))
    }

    /// Inverse of [`BlochState::to_density`] with `theta` reduced to `[0, pi)`.
    ///
    /// `(r, theta)` and `(1 - r, theta + pi)` name the same state; the
    /// representative with `theta` in `[0, pi)` is returned.
    pub fn from_density(rho: &DensityMatrix) -> Result<Self> {
        if rho.dim() != 2 {
            return Err(Error::DimensionMismatch(format!("Bloch chart needs a qubit, got dim {}", rho.dim())));
        }
        let m = rho.as_matrix();
        let x = 2.0 * m[(0, 1)].re;
        let y = -2.0 * m[(0, 1)].im;
        let z = (m[(0, 0)].re - m[(1, 1)].re).clamp(-1.0, 1.0);
        if y.abs() > 1e-12 {
            return Err(Error::InvalidState(format!("state has sigma_2 component {y:e}")));
        }
        let len = x.hypot(z).min(1.0);
        let phi = x.atan2(z);
        let pi = std::f64::consts::PI;
        let (r, theta) = if (0.0..pi).contains(&phi) {
            (0.5 * (1.0 + len), phi)
        } else if phi < 0.0 {
            (0.5 * (1.0 - len), phi + pi)
        } else {
            (0.5 * (1.0 - len), 0.0)
        };
        Self::new(r, theta)
    }
}
