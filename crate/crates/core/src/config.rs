//! Numerical tolerances shared by every module.
//!
//! Tests and library code read thresholds from [`TOL`] rather than
//! repeating literals, so a single edit here moves every check consistently.

/// One record holding every tolerance used by the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Allowed deviation from Hermitian symmetry before symmetrization.
    pub hermitian: f64,
    /// Jacobi stops once the off-diagonal Frobenius norm falls below this
    /// fraction of the full Frobenius norm.
    pub jacobi_off_diagonal: f64,
    /// Sweep cap for the Jacobi eigensolver.
    pub jacobi_max_sweeps: usize,
    /// `psd(m)` holds when the smallest eigenvalue is at least `-psd`.
    pub psd: f64,
    /// Eigenvalues at or below this are treated as zero by the pseudo-inverse square root.
    pub inverse_sqrt_cutoff: f64,
    /// Unit-trace tolerance for density matrices.
    pub trace: f64,
    /// Kraus completeness `sum K^dag K = 1`.
    pub kraus_completeness: f64,
    /// Choi eigenvalues below this do not produce a Kraus operator.
    pub kraus_cutoff: f64,
    /// Eigenvalues of a marginal below this are dropped from its support before solving.
    pub support_cutoff: f64,
    /// Certified duality gap required of an optimal transport solution.
    pub certified_gap: f64,
    /// Trace-norm bound on the coupling marginal residuals of an optimal solution.
    pub marginal_residual: f64,
    /// Dual pair membership: `F` may have eigenvalues down to `-dual_feasibility`.
    pub dual_feasibility: f64,
    /// A campaign sample with `delta < -violation` counts as a monotonicity violation.
    pub violation: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        hermitian: 1e-12,
        jacobi_off_diagonal: 1e-14,
        jacobi_max_sweeps: 100,
        psd: 1e-10,
        inverse_sqrt_cutoff: 1e-12,
        trace: 1e-12,
        kraus_completeness: 1e-10,
        kraus_cutoff: 1e-12,
        support_cutoff: 1e-13,
        certified_gap: 1e-7,
        marginal_residual: 1e-8,
        dual_feasibility: 1e-8,
        violation: 1e-7,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

pub const TOL: Tolerances = Tolerances::DEFAULT;
