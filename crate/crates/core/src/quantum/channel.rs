//! CPTP maps in Kraus and Choi form.
//!
//! Choi convention: `J = sum_ij Phi(|i><j|) (x) |i><j|`, output factor first,
//! so `J[(a, i), (b, j)] = sum_k K_k[a][i] conj(K_k[b][j])` with the bipartite
//! index `a * dim_in + i`. The stored Choi state is `J / dim_in` (unit trace).
//! With this convention the channel acts as `Phi(rho) = dim_in * Tr_2[rho_Phi (1 (x) rho^T)]`.

use crate::config::TOL;
use crate::error::{Error, Result};
use crate::linalg::{partial_trace_matrix, ComplexMatrix, HermitianMatrix, Subsystem, ZERO};
use crate::quantum::DensityMatrix;

#[derive(Debug, Clone)]
pub struct QuantumChannel {
    dim_in: usize,
    dim_out: usize,
    kraus: Vec<ComplexMatrix>,
    choi: Option<DensityMatrix>,
}

impl QuantumChannel {
    /// Validates shapes and completeness `sum K^dag K = 1` within `TOL.kraus_completeness`.
    pub fn from_kraus(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus.first().ok_or_else(|| Error::InvalidChannel("empty Kraus list".into()))?;
        let (dim_out, dim_in) = (first.rows(), first.cols());
        if kraus.iter().any(|k| k.rows() != dim_out || k.cols() != dim_in) {
            return Err(Error::InvalidChannel("Kraus operators have inconsistent shapes".into()));
        }
        let ch = Self { dim_in, dim_out, kraus, choi: None };
        let defect = ch.completeness_defect();
        if defect > TOL.kraus_completeness {
            return Err(Error::InvalidChannel(format!("Kraus completeness violated by {defect:e}")));
        }
        Ok(ch)
    }

    /// Builds a channel from its unit-trace Choi state on `dim_out * dim_in`.
    /// Kraus operators are extracted from the spectrum of `dim_in * rho_Phi`.
    pub fn from_choi(choi: DensityMatrix, dim_in: usize, dim_out: usize) -> Result<Self> {
        if choi.dim() != dim_in * dim_out {
            return Err(Error::DimensionMismatch(format!(
                "Choi matrix of dim {} for a {dim_in} -> {dim_out} channel",
                choi.dim()
            )));
        }
        let j = choi.hermitian().scale(dim_in as f64);
        let tp = partial_trace_matrix(j.as_matrix(), (dim_out, dim_in), Subsystem::A)?;
        let defect = (&tp - &ComplexMatrix::identity(dim_in)).frobenius_norm();
        if defect > TOL.kraus_completeness {
            return Err(Error::InvalidChannel(format!("Choi matrix is not trace preserving (defect {defect:e})")));
        }
        let kraus = kraus_from_choi_operator(&j, dim_in, dim_out)?;
        let mut ch = Self::from_kraus(kraus)?;
        ch.choi = Some(choi);
        Ok(ch)
    }

    pub fn identity(n: usize) -> Self {
        Self { dim_in: n, dim_out: n, kraus: vec![ComplexMatrix::identity(n)], choi: None }
    }

    /// Conjugation by `u`, which must be unitary.
    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        Self::from_kraus(vec![u])
    }

    /// `sum_i p_i U_i . U_i^dag`.
    pub fn mixed_unitary(weights: &[f64], unitaries: &[ComplexMatrix]) -> Result<Self> {
        if weights.len() != unitaries.len() || weights.is_empty() {
            return Err(Error::InvalidChannel("weights and unitaries differ in length".into()));
        }
        if weights.iter().any(|&p| p < 0.0) {
            return Err(Error::InvalidChannel("negative mixing weight".into()));
        }
        let kraus = weights.iter().zip(unitaries).map(|(&p, u)| u.scale(p.sqrt())).collect();
        Self::from_kraus(kraus)
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// Stored Choi state, or one assembled from the Kraus operators.
    pub fn choi(&self) -> DensityMatrix {
        if let Some(c) = &self.choi {
            return c.clone();
        }
        let (n_in, n_out) = (self.dim_in, self.dim_out);
        let d = n_in * n_out;
        let mut j = ComplexMatrix::zeros(d, d);
        for k in &self.kraus {
            let w = k.data();
            for p in 0..d {
                let wp = w[p];
                if wp == ZERO {
                    continue;
                }
                for q in 0..d {
                    j[(p, q)] += wp * w[q].conj();
                }
            }
        }
        let rho = HermitianMatrix::from_hermitian_unchecked(j.hermitian_part()).scale(1.0 / n_in as f64);
        DensityMatrix::from_trusted(rho)
    }

    /// Frobenius norm of `sum K^dag K - 1`.
    pub fn completeness_defect(&self) -> f64 {
        let mut s = ComplexMatrix::zeros(self.dim_in, self.dim_in);
        for k in &self.kraus {
            s += &k.adjoint_mul(k);
        }
        (&s - &ComplexMatrix::identity(self.dim_in)).frobenius_norm()
    }

    /// Completeness within `tol` and a PSD Choi matrix (eigenvalues `>= -tol`).
    pub fn is_cptp(&self, tol: f64) -> Result<bool> {
        if self.completeness_defect() > tol {
            return Ok(false);
        }
        self.choi().hermitian().is_psd(tol)
    }

    /// `sum K X K^dag` on an arbitrary Hermitian input.
    pub fn apply_hermitian(&self, x: &HermitianMatrix) -> Result<HermitianMatrix> {
        if x.dim() != self.dim_in {
            return Err(Error::DimensionMismatch(format!(
                "channel input dim {} but operand dim {}",
                self.dim_in,
                x.dim()
            )));
        }
        let mut out = ComplexMatrix::zeros(self.dim_out, self.dim_out);
        for k in &self.kraus {
            out += &k.sandwich(x.as_matrix());
        }
        HermitianMatrix::new(out)
    }

    /// Kraus-path action `sum K rho K^dag`.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let out = self.apply_hermitian(rho.hermitian())?;
        DensityMatrix::with_tolerance(out, 1e-10, 1e-9)
    }

    /// Choi-path action `dim_in * Tr_2[rho_Phi (1 (x) X^T)]` on a Hermitian operand.
    pub fn apply_choi_hermitian(&self, x: &HermitianMatrix) -> Result<HermitianMatrix> {
        if x.dim() != self.dim_in {
            return Err(Error::DimensionMismatch(format!(
                "channel input dim {} but operand dim {}",
                self.dim_in,
                x.dim()
            )));
        }
        let choi = self.choi();
        let lifted = ComplexMatrix::identity(self.dim_out).kron(&x.as_matrix().transpose());
        let prod = choi.as_matrix().matmul(&lifted);
        let reduced = partial_trace_matrix(&prod, (self.dim_out, self.dim_in), Subsystem::B)?;
        HermitianMatrix::new(reduced.scale(self.dim_in as f64))
    }

    pub fn apply_choi(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let out = self.apply_choi_hermitian(rho.hermitian())?;
        DensityMatrix::with_tolerance(out, 1e-10, 1e-9)
    }

    /// Heisenberg-picture dual `sum K^dag sigma K`.
    pub fn dual_apply(&self, sigma: &HermitianMatrix) -> Result<HermitianMatrix> {
        if sigma.dim() != self.dim_out {
            return Err(Error::DimensionMismatch(format!(
                "channel output dim {} but operand dim {}",
                self.dim_out,
                sigma.dim()
            )));
        }
        let mut out = ComplexMatrix::zeros(self.dim_in, self.dim_in);
        for k in &self.kraus {
            out += &k.adjoint_mul(&sigma.as_matrix().matmul(k));
        }
        HermitianMatrix::new(out)
    }

    /// `other` after `self`.
    pub fn then(&self, other: &Self) -> Result<Self> {
        if self.dim_out != other.dim_in {
            return Err(Error::DimensionMismatch("channel composition dims differ".into()));
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * other.kraus.len());
        for b in &other.kraus {
            for a in &self.kraus {
                kraus.push(b.matmul(a));
            }
        }
        Self::from_kraus(kraus)
    }

    /// `p * self + (1 - p) * other`.
    pub fn convex_mix(&self, other: &Self, p: f64) -> Result<Self> {
        if self.dim_in != other.dim_in || self.dim_out != other.dim_out {
            return Err(Error::DimensionMismatch("mixing channels of different shape".into()));
        }
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!("mixing weight {p} outside [0, 1]")));
        }
        let mut kraus: Vec<ComplexMatrix> = self.kraus.iter().map(|k| k.scale(p.sqrt())).collect();
        kraus.extend(other.kraus.iter().map(|k| k.scale((1.0 - p).sqrt())));
        Self::from_kraus(kraus)
    }
}

/// Kraus operators from the unnormalized Choi operator `J`: each eigenpair
/// `(lambda, w)` above the cutoff gives `K[a][i] = sqrt(lambda) w[a * dim_in + i]`.
fn kraus_from_choi_operator(j: &HermitianMatrix, dim_in: usize, dim_out: usize) -> Result<Vec<ComplexMatrix>> {
    let e = j.eigh()?;
    let lo = e.eigenvalues.first().copied().unwrap_or(0.0);
    if lo < -TOL.psd * j.frobenius_norm().max(1.0) {
        return Err(Error::InvalidChannel(format!("Choi matrix has negative eigenvalue {lo:e}")));
    }
    let mut kraus = Vec::new();
    for (col, &lambda) in e.eigenvalues.iter().enumerate().rev() {
        if lambda <= TOL.kraus_cutoff {
            continue;
        }
        let s = lambda.sqrt();
        kraus.push(ComplexMatrix::from_fn(dim_out, dim_in, |a, i| e.eigenvectors[(a * dim_in + i, col)] * s));
    }
    if kraus.is_empty() {
        return Err(Error::InvalidChannel("Choi matrix is zero".into()));
    }
    Ok(kraus)
}
