//! Closed-form and semi-analytic qubit formulas.
//!
//! States live on the real slice of the Bloch ball,
//! `rho(r, theta) = (1 + (2r - 1)(sin(theta) s1 + cos(theta) s3)) / 2`. Every
//! quantity here is a maximum over an angle `phi`, found by a dense grid
//! followed by golden-section refinement.

mod analytic;
mod lemma_f;
mod metric;

pub use analytic::{dual_commutator_norm, tq_commuting, tq_isospectral, tq_of_states, tq_semianalytic};
pub use lemma_f::{lemma_f_matrices, lemma_f_scan, lemma_f_sigmas, LemmaFParams, LemmaFReport};
pub(crate) use metric::csv_error;
pub use metric::{
    affine_fit_residual, finite_difference_g, g11, g22, metric_derivative_g, riemann_witness, write_witness_csv,
    TangentVector, WitnessRow,
};

use std::f64::consts::TAU;

/// Number of uniform grid points over `[0, 2 pi)`.
pub const GRID_POINTS: usize = 4096;
/// Width of the final golden-section bracket in `phi`.
pub const PHI_TOLERANCE: f64 = 1e-12;

/// `max_{phi in [0, 2 pi)} f(phi)` and an argmax.
pub fn maximize_periodic(f: impl Fn(f64) -> f64) -> (f64, f64) {
    let h = TAU / GRID_POINTS as f64;
    let (mut k_best, mut f_best) = (0, f(0.0));
    for k in 1..GRID_POINTS {
        let v = f(k as f64 * h);
        if v > f_best {
            k_best = k;
            f_best = v;
        }
    }
    let center = k_best as f64 * h;
    let (mut a, mut b) = (center - h, center + h);
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > PHI_TOLERANCE {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    let mid = 0.5 * (a + b);
    let f_mid = f(mid);
    let (phi, val) = [(center, f_best), (x1, f1), (x2, f2), (mid, f_mid)]
        .into_iter()
        .fold((center, f_best), |best, c| if c.1 > best.1 { c } else { best });
    (phi.rem_euclid(TAU), val)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_off_grid_peak() {
        let peak = 1.234_567_890_123;
        let (phi, v) = maximize_periodic(|p| (p - peak).cos());
        assert!((phi - peak).abs() < 1e-6);
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn wraps_around_zero() {
        let (phi, v) = maximize_periodic(|p| (p + 1e-5).cos());
        assert!((v - 1.0).abs() < 1e-15);
        assert!((phi - (TAU - 1e-5)).abs() < 1e-6);
    }
}
