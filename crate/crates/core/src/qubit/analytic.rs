//! Transport cost between qubits with the projector cost.

use super::maximize_periodic;
use crate::error::{Error, Result};
use crate::quantum::DensityMatrix;
use crate::sdp::{solve, Objective, SolverOptions, TransportProblem};

/// `sqrt(1 + (2r - 1) cos a)`, written as `sqrt(2 (r cos^2(a/2) + (1-r) sin^2(a/2)))`
/// to avoid cancellation near pure states.
pub(crate) fn bloch_sqrt(r: f64, a: f64) -> f64 {
    let (s, c) = (0.5 * a).sin_cos();
    (2.0 * (r * c * c + (1.0 - r) * s * s)).max(0.0).sqrt()
}

/// `T^Q(rho(s, 0), rho(r, theta))` as a maximum over `phi` of
/// `(sqrt(1 + (2s-1) cos phi) - sqrt(1 + (2r-1) cos(theta + phi)))^2 / 4`.
///
/// The expression is periodic in `theta`, so any finite angle is accepted.
pub fn tq_semianalytic(s: f64, r: f64, theta: f64) -> f64 {
    maximize_periodic(|phi| {
        let d = bloch_sqrt(s, phi) - bloch_sqrt(r, theta + phi);
        0.25 * d * d
    })
    .1
}

/// Commuting states: `max{(sqrt r - sqrt s)^2, (sqrt(1-r) - sqrt(1-s))^2} / 2`.
pub fn tq_commuting(s: f64, r: f64) -> f64 {
    let a = r.sqrt() - s.sqrt();
    let b = (1.0 - r).sqrt() - (1.0 - s).sqrt();
    0.5 * (a * a).max(b * b)
}

/// Isospectral states: `(1/2 - sqrt(r(1-r))) sin^2(theta/2)`.
pub fn tq_isospectral(r: f64, theta: f64) -> f64 {
    (0.5 - (r * (1.0 - r)).sqrt()) * (0.5 * theta).sin().powi(2)
}

fn bloch(rho: &DensityMatrix) -> Result<[f64; 3]> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch(format!("expected a qubit, got dim {}", rho.dim())));
    }
    let m = rho.as_matrix();
    Ok([2.0 * m[(0, 1)].re, -2.0 * m[(0, 1)].im, m[(0, 0)].re - m[(1, 1)].re])
}

/// Semi-analytic `T^Q` for arbitrary qubits, after rotating both Bloch
/// vectors into the real slice.
pub fn tq_of_states(rho_a: &DensityMatrix, rho_b: &DensityMatrix) -> Result<f64> {
    let a = bloch(rho_a)?;
    let b = bloch(rho_b)?;
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    let dot: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
    let cross = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
    let sin = cross.iter().map(|x| x * x).sum::<f64>().sqrt();
    let theta = sin.atan2(dot);
    Ok(tq_semianalytic(0.5 * (1.0 + na.min(1.0)), 0.5 * (1.0 + nb.min(1.0)), theta))
}

/// Frobenius norm of `[sigma_A, sigma_B]` for the solver's optimal dual pair.
///
/// Optimal dual pairs for qubits are expected to commute; the value is a
/// diagnostic with no threshold attached.
pub fn dual_commutator_norm(rho_a: &DensityMatrix, rho_b: &DensityMatrix) -> Result<f64> {
    let problem =
        TransportProblem::new(rho_a.clone(), rho_b.clone(), crate::cost::projector_cost(2), Objective::Linear)?;
    let sol = solve(&problem, &SolverOptions::default())?;
    let (a, b) = (&sol.dual.sigma_a, &sol.dual.sigma_b);
    Ok((&a.matmul(b) - &b.matmul(a)).frobenius_norm())
}
