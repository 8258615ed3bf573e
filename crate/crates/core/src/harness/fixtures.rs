//! A qutrit pair whose line-geometry transport cost doubles under a unitary.
//!
//! `rho_A ~ |1> + |2>`, `rho_B ~ |1> + 2|2>` (pure), cost from `E_12 = E_23 = 1`,
//! `E_13 = 2`, and `U` exchanging `|2>` and `|3>` up to a sign. Pure marginals
//! admit only the product coupling, so both values are `Tr C (rho_A (x) rho_B)`:
//! `1/20` before and `1/10` after.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cost::{cost_from_classical, projector_cost, ClassicalCost, CostMatrix};
use crate::error::Result;
use crate::linalg::ComplexMatrix;
use crate::quantum::DensityMatrix;
use crate::sdp::{solve, Objective, SolverOptions, TransportProblem};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub direct_before: f64,
    pub direct_after: f64,
    pub sdp_before: f64,
    pub sdp_after: f64,
    pub gap_before: f64,
    pub gap_after: f64,
    pub projector_before: f64,
    pub projector_after: f64,
}

impl CounterexampleReport {
    /// Whether every value matches its exact counterpart within `tol` and the cost increased.
    pub fn holds(&self, tol: f64) -> bool {
        (self.direct_before - 0.05).abs() <= tol
            && (self.sdp_before - 0.05).abs() <= tol
            && (self.direct_after - 0.1).abs() <= tol
            && (self.sdp_after - 0.1).abs() <= tol
            && (self.projector_after - self.projector_before).abs() <= tol
            && self.sdp_after > self.sdp_before
    }
}

fn pure(amplitudes: [f64; 3]) -> Result<DensityMatrix> {
    let norm = amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt();
    DensityMatrix::pure(&amplitudes.map(|a| Complex64::new(a / norm, 0.0)))
}

pub fn counterexample_unitary() -> ComplexMatrix {
    ComplexMatrix::from_real(3, 3, &[1.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0, 0.0]).expect("3x3")
}

fn sdp_value(a: &DensityMatrix, b: &DensityMatrix, cost: &CostMatrix) -> Result<(f64, f64)> {
    let sol = solve(
        &TransportProblem::new(a.clone(), b.clone(), cost.clone(), Objective::Linear)?,
        &SolverOptions::default(),
    )?;
    Ok((sol.value, sol.gap))
}

pub fn counterexample_fixture() -> Result<CounterexampleReport> {
    let rho_a = pure([1.0, 1.0, 0.0])?;
    let rho_b = pure([1.0, 2.0, 0.0])?;
    let u = counterexample_unitary();
    let eta_a = rho_a.conjugate_by(&u);
    let eta_b = rho_b.conjugate_by(&u);
    let line = cost_from_classical(&ClassicalCost::line(3), 1)?;
    let direct = |a: &DensityMatrix, b: &DensityMatrix| line.mat.trace_product(&a.hermitian().tensor(b.hermitian()));
    let (sdp_before, gap_before) = sdp_value(&rho_a, &rho_b, &line)?;
    let (sdp_after, gap_after) = sdp_value(&eta_a, &eta_b, &line)?;
    let proj = projector_cost(3);
    Ok(CounterexampleReport {
        direct_before: direct(&rho_a, &rho_b),
        direct_after: direct(&eta_a, &eta_b),
        sdp_before,
        sdp_after,
        gap_before,
        gap_after,
        projector_before: sdp_value(&rho_a, &rho_b, &proj)?.0,
        projector_after: sdp_value(&eta_a, &eta_b, &proj)?.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_maps_states_as_printed() {
        let u = counterexample_unitary();
        let eta = pure([1.0, 2.0, 0.0]).unwrap().conjugate_by(&u);
        let expect = pure([1.0, 0.0, 2.0]).unwrap();
        assert!((eta.as_matrix() - expect.as_matrix()).max_abs() < 1e-15);
    }
}
