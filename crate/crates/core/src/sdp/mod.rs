//! Optimal transport between density matrices as a semidefinite program.
//!
//! Primal: minimize `Tr(C rho_AB)` over couplings with `Tr_B rho_AB = rho_A`,
//! `Tr_A rho_AB = rho_B`. Dual: maximize `Tr(sigma_A rho_A + sigma_B rho_B)`
//! subject to `C - sigma_A (x) 1 - 1 (x) sigma_B >= 0`.
//!
//! Rank-deficient marginals are handled by restricting the problem to
//! `supp(rho_A) (x) supp(rho_B)`, where every coupling lives, so the
//! interior-point method always sees strictly positive marginals. On that face
//! the dual pair is extended by `-kappa` on the orthogonal complement of each
//! support; the reported dual value is unaffected because the states carry no
//! weight there. The optimum over pure marginals is generally not attained by
//! any finite dual pair, so the extension need not be dual feasible.
//!
//! The interior-point method runs in the marginal eigenbases with the coupling
//! rescaled by `(A (x) B)^{-1/2}`; see [`constraints`] for why.

mod constraints;
mod ipm;

use serde::{Deserialize, Serialize};

use crate::config::TOL;
use crate::cost::{projector_cost, ClassicalCost, CostMatrix};
use crate::error::{Error, Result};
use crate::linalg::{fast_eigenvalues, ComplexMatrix, HermitianMatrix, Subsystem};
use crate::quantum::DensityMatrix;
use constraints::{kron_sum, MarginalConstraints};
use ipm::{IpmOutcome, IpmSettings};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Objective {
    /// `Tr(C rho_AB)`.
    Linear,
    /// `Tr(C^2 rho_AB)`, whose square root is the 2-Wasserstein semi-distance.
    Squared,
}

#[derive(Debug, Clone)]
pub struct TransportProblem {
    pub rho_a: DensityMatrix,
    pub rho_b: DensityMatrix,
    pub cost: CostMatrix,
    pub objective: Objective,
}

impl TransportProblem {
    pub fn new(rho_a: DensityMatrix, rho_b: DensityMatrix, cost: CostMatrix, objective: Objective) -> Result<Self> {
        let n = rho_a.dim();
        if rho_b.dim() != n {
            return Err(Error::DimensionMismatch(format!("marginals have dims {} and {}", n, rho_b.dim())));
        }
        if cost.dim() != n * n {
            return Err(Error::DimensionMismatch(format!("cost of dim {} for states of dim {n}", cost.dim())));
        }
        Ok(Self { rho_a, rho_b, cost, objective })
    }

    fn cost_operator(&self) -> ComplexMatrix {
        match self.objective {
            Objective::Linear => self.cost.mat.as_matrix().clone(),
            Objective::Squared => self.cost.mat.as_matrix().matmul(self.cost.mat.as_matrix()).hermitian_part(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    pub tol_gap: f64,
    pub tol_feas: f64,
    pub max_iter: usize,
    pub dim_cap: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol_gap: 1e-9, tol_feas: 1e-10, max_iter: 200, dim_cap: 8 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DualPair {
    pub sigma_a: HermitianMatrix,
    pub sigma_b: HermitianMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Optimal,
    MaxIter,
    InfeasibleNumerics,
}

impl std::fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Optimal => "optimal",
            Self::MaxIter => "max-iter",
            Self::InfeasibleNumerics => "infeasible-numerics",
        })
    }
}

#[derive(Debug, Clone)]
pub struct TransportSolution {
    /// Certified transport value: the dual objective, clipped at zero.
    pub value: f64,
    pub coupling: DensityMatrix,
    pub dual: DualPair,
    pub primal_value: f64,
    pub dual_value: f64,
    /// `primal_value - dual_value`.
    pub gap: f64,
    pub iterations: usize,
    pub status: SolveStatus,
    /// Larger trace-norm residual of the two coupling marginals.
    pub marginal_residual: f64,
    /// Smallest eigenvalue of `C - sigma_A (x) 1 - 1 (x) sigma_B`.
    pub dual_min_eigenvalue: f64,
}

impl TransportSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}

/// Eigenbasis of one marginal restricted to its support.
struct Face {
    /// `n x k` isometry onto the support.
    basis: ComplexMatrix,
    /// Kept eigenvalues, renormalized to unit sum.
    spectrum: Vec<f64>,
}

impl Face {
    fn new(rho: &DensityMatrix) -> Result<Self> {
        let e = rho.hermitian().eigh()?;
        let keep: Vec<usize> = (0..rho.dim()).filter(|&k| e.eigenvalues[k] > TOL.support_cutoff).collect();
        if keep.is_empty() {
            return Err(Error::InvalidState("state has empty support".into()));
        }
        let total: f64 = keep.iter().map(|&k| e.eigenvalues[k]).sum();
        let spectrum = keep.iter().map(|&k| e.eigenvalues[k] / total).collect();
        let basis = ComplexMatrix::from_fn(rho.dim(), keep.len(), |i, j| e.eigenvectors[(i, keep[j])]);
        Ok(Self { basis, spectrum })
    }

    fn dim(&self) -> usize {
        self.spectrum.len()
    }

    fn is_full(&self) -> bool {
        self.basis.rows() == self.dim()
    }

    /// Undo the scaling: `s = D^{-1/2} tau D^{-1/2}` in the eigenbasis, then
    /// `V s V^dag - kappa (1 - V V^dag)`.
    fn lift_dual(&self, tau: &ComplexMatrix, kappa: f64) -> ComplexMatrix {
        let k = self.dim();
        let s = ComplexMatrix::from_fn(k, k, |i, j| tau[(i, j)] / (self.spectrum[i] * self.spectrum[j]).sqrt());
        let mut out = self.basis.sandwich(&s);
        if !self.is_full() {
            let n = self.basis.rows();
            let p = self.basis.mul_adjoint(&self.basis);
            out -= &(&ComplexMatrix::identity(n) - &p).scale(kappa);
        }
        out
    }
}

/// Upper bound on the spectral radius of a Hermitian matrix (largest absolute row sum).
fn spectral_bound(c: &ComplexMatrix) -> f64 {
    (0..c.rows()).map(|i| c.row(i).iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    Ok(fast_eigenvalues(&m.hermitian_part())?.iter().map(|l| l.abs()).sum())
}

pub fn solve(problem: &TransportProblem, opts: &SolverOptions) -> Result<TransportSolution> {
    let n = problem.rho_a.dim();
    if n > opts.dim_cap {
        return Err(Error::DimensionCap { dim: n, cap: opts.dim_cap });
    }
    let c_full = problem.cost_operator();
    let face_a = Face::new(&problem.rho_a)?;
    let face_b = Face::new(&problem.rho_b)?;
    let (da, db) = (face_a.dim(), face_b.dim());
    let u = face_a.basis.kron(&face_b.basis);
    // Diagonal of (A (x) B)^{1/2} in the product eigenbasis.
    let scale: Vec<f64> =
        face_a.spectrum.iter().flat_map(|a| face_b.spectrum.iter().map(move |b| (a * b).sqrt())).collect();
    let c_eig = u.adjoint_mul(&c_full.matmul(&u));
    let d = da * db;
    let c = ComplexMatrix::from_fn(d, d, |i, j| c_eig[(i, j)] * (scale[i] * scale[j])).hermitian_part();

    let cons = MarginalConstraints::new(&face_a.spectrum, &face_b.spectrum);
    let (y_scaled, y, iterations, outcome) = if d == 1 {
        // Both marginals pure: the coupling is unique.
        (ComplexMatrix::identity(1), vec![c[(0, 0)].re], 0, IpmOutcome::Converged)
    } else {
        // Y = 1 is the product coupling. tau_A = tau_B = -s gives
        // Z = C + s (1 (x) B + A (x) 1), graded like a + b rather than a b.
        let shift = 2.0 * spectral_bound(&c_full).max(1.0);
        let y0 = cons.coords_of(&ComplexMatrix::identity(da).scale(-shift), &ComplexMatrix::identity(db).scale(-shift));
        let settings = IpmSettings {
            tol_gap: opts.tol_gap,
            tol_feas: opts.tol_feas,
            max_iter: opts.max_iter,
            certified_gap: TOL.certified_gap,
            certified_feas: 0.1 * TOL.marginal_residual,
        };
        let r = ipm::solve(&cons, &c, &cons.rhs(), ComplexMatrix::identity(d), y0, &settings);
        (r.x, r.y, r.iterations, r.outcome)
    };

    let (tau_a, tau_b) = cons.split(&y);
    let x_eig = ComplexMatrix::from_fn(d, d, |i, j| y_scaled[(i, j)] * (scale[i] * scale[j]));
    let x = u.sandwich(&x_eig);
    let kappa = spectral_bound(&c_full)
        + spectral_bound(&face_a.lift_dual(&tau_a, 0.0))
        + spectral_bound(&face_b.lift_dual(&tau_b, 0.0))
        + 1.0;
    let sigma_a = face_a.lift_dual(&tau_a, kappa).hermitian_part();
    let sigma_b = face_b.lift_dual(&tau_b, kappa).hermitian_part();
    let x = x.hermitian_part();
    let sigma_a = HermitianMatrix::new(sigma_a)?;
    let sigma_b = HermitianMatrix::new(sigma_b)?;

    let primal_value = c_full.inner_re(&x);
    let dual_value =
        sigma_a.trace_product(problem.rho_a.hermitian()) + sigma_b.trace_product(problem.rho_b.hermitian());
    let gap = primal_value - dual_value;
    let x_h = HermitianMatrix::new(x)?;
    let res_a = trace_norm(&(x_h.partial_trace((n, n), Subsystem::B)?.as_matrix() - problem.rho_a.as_matrix()))?;
    let res_b = trace_norm(&(x_h.partial_trace((n, n), Subsystem::A)?.as_matrix() - problem.rho_b.as_matrix()))?;
    let marginal_residual = res_a.max(res_b);
    let f = &c_full - &kron_sum(sigma_a.as_matrix(), sigma_b.as_matrix());
    let dual_min_eigenvalue = fast_eigenvalues(&f)?.first().copied().unwrap_or(0.0);

    let mut status = match outcome {
        IpmOutcome::Converged | IpmOutcome::Certified => SolveStatus::Optimal,
        IpmOutcome::MaxIter => SolveStatus::MaxIter,
        IpmOutcome::NumericalFailure => SolveStatus::InfeasibleNumerics,
    };
    if status == SolveStatus::Optimal && (gap.abs() > TOL.certified_gap || marginal_residual > TOL.marginal_residual) {
        status = SolveStatus::InfeasibleNumerics;
    }

    Ok(TransportSolution {
        value: dual_value.max(0.0),
        coupling: DensityMatrix::from_trusted(x_h),
        dual: DualPair { sigma_a, sigma_b },
        primal_value,
        dual_value,
        gap,
        iterations,
        status,
        marginal_residual,
        dual_min_eigenvalue,
    })
}

/// Solves and insists on an optimal status.
fn solve_optimal(problem: &TransportProblem) -> Result<TransportSolution> {
    let sol = solve(problem, &SolverOptions::default())?;
    if !sol.is_optimal() {
        return Err(Error::Solver(format!(
            "transport solve ended with status {} (gap {:e}, marginal residual {:e})",
            sol.status, sol.gap, sol.marginal_residual
        )));
    }
    Ok(sol)
}

/// Optimal value of `Tr(C rho_AB)` over couplings of `rho_a` and `rho_b`.
pub fn transport_cost(rho_a: &DensityMatrix, rho_b: &DensityMatrix, cost: &CostMatrix) -> Result<f64> {
    let p = TransportProblem::new(rho_a.clone(), rho_b.clone(), cost.clone(), Objective::Linear)?;
    Ok(solve_optimal(&p)?.value)
}

/// Square root of the optimal value with the squared cost built from `e`.
pub fn wasserstein(rho_a: &DensityMatrix, rho_b: &DensityMatrix, e: &ClassicalCost) -> Result<f64> {
    let cost = crate::cost::cost_from_classical(e, 1)?;
    let p = TransportProblem::new(rho_a.clone(), rho_b.clone(), cost, Objective::Squared)?;
    Ok(solve_optimal(&p)?.value.sqrt())
}

/// `max Tr(S rho_AB) = 1 - 2 T` with the projector cost.
pub fn swap_fidelity(rho_a: &DensityMatrix, rho_b: &DensityMatrix) -> Result<f64> {
    Ok(1.0 - 2.0 * transport_cost(rho_a, rho_b, &projector_cost(rho_a.dim()))?)
}

/// Whether `C - sigma_A (x) 1 - 1 (x) sigma_B >= -TOL.dual_feasibility`, with the smallest eigenvalue.
pub fn check_dual_feasible(
    sigma_a: &HermitianMatrix,
    sigma_b: &HermitianMatrix,
    cost: &CostMatrix,
) -> Result<(bool, f64)> {
    let n = sigma_a.dim();
    if sigma_b.dim() != n || cost.dim() != n * n {
        return Err(Error::DimensionMismatch("dual pair and cost dims differ".into()));
    }
    let f = cost.mat.as_matrix() - &kron_sum(sigma_a.as_matrix(), sigma_b.as_matrix());
    let lo = fast_eigenvalues(&f)?.first().copied().unwrap_or(0.0);
    Ok((lo >= -TOL.dual_feasibility, lo))
}
