//! Dual positivity under extremal qubit channels for diagonal dual pairs.
//!
//! With `c = Tr(sigma_A s3)`, `d = Tr(sigma_B s3)` and `x = Tr(sigma_A + sigma_B)`,
//! `F = C^Q - sigma_A (x) 1 - 1 (x) sigma_B` and its image `F^Phi` under the
//! dual of the `(u, v)` extremal channel are block diagonal with explicit
//! entries. The scan checks that `F >= 0` implies `F^Phi >= 0`.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::HermitianMatrix;
use crate::quantum::RngStream;

/// Threshold below which an eigenvalue of `F^Phi` counts as a violation.
pub const VIOLATION_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaFParams {
    pub c: f64,
    pub d: f64,
    pub x: f64,
}

impl LemmaFParams {
    pub fn new(c: f64, d: f64, x: f64) -> Self {
        Self { c, d, x }
    }

    /// `x <= 0`, `|c + d| <= -x`, `|c - d| <= 1 - x` and `(c - d)^2 <= x (x - 2)`:
    /// exactly the conditions for `F >= 0`.
    pub fn is_admissible(&self) -> bool {
        let Self { c, d, x } = *self;
        x <= 0.0 && (c + d).abs() <= -x && (c - d).abs() <= 1.0 - x && (c - d).powi(2) <= x * (x - 2.0)
    }
}

/// `(F, F^Phi)` for the extremal qubit channel with angles `(u, v)`.
pub fn lemma_f_matrices(p: LemmaFParams, u: f64, v: f64) -> (HermitianMatrix, HermitianMatrix) {
    let LemmaFParams { c, d, x } = p;
    let alpha = (u - v).cos();
    let beta = (u + v).cos();
    let block = |f11: f64, f22: f64, f33: f64, f44: f64| {
        #[rustfmt::skip]
        let m = [
            f11, 0.0, 0.0, 0.0,
            0.0, f22, -1.0, 0.0,
            0.0, -1.0, f33, 0.0,
            0.0, 0.0, 0.0, f44,
        ];
        HermitianMatrix::from_real(4, &m.map(|e| 0.5 * e)).expect("symmetric 4x4")
    };
    let f = block(-(c + d + x), 1.0 - c + d - x, 1.0 + c - d - x, c + d - x);
    let f_phi =
        block(-(c + d) * alpha - x, 1.0 - c * alpha + d * beta - x, 1.0 + c * beta - d * alpha - x, (c + d) * beta - x);
    (f, f_phi)
}

/// A diagonal dual pair with the given parameters, split so that
/// `Tr sigma_A = Tr sigma_B = x / 2`.
pub fn lemma_f_sigmas(p: LemmaFParams) -> (HermitianMatrix, HermitianMatrix) {
    let half = 0.25 * p.x;
    (
        HermitianMatrix::diag(&[half + 0.5 * p.c, half - 0.5 * p.c]),
        HermitianMatrix::diag(&[half + 0.5 * p.d, half - 0.5 * p.d]),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaFReport {
    pub samples: usize,
    /// Box draws including rejected ones.
    pub draws: usize,
    pub min_eigenvalue_f: f64,
    pub min_eigenvalue_f_phi: f64,
    /// Samples with an eigenvalue of `F^Phi` below `-1e-10`.
    pub violations: usize,
    pub tolerance: f64,
}

/// Draws `samples` admissible `(c, d, x)` by rejection from
/// `x in [-4, 0]`, `c + d in [x, -x]`, `c - d in [x - 1, 1 - x]`, with
/// `u in [0, 2 pi)` and `v in [0, pi)` uniform, and records the smallest
/// eigenvalues of `F` and `F^Phi`.
pub fn lemma_f_scan(samples: usize, rng: &mut RngStream) -> Result<LemmaFReport> {
    let mut report = LemmaFReport {
        samples,
        draws: 0,
        min_eigenvalue_f: f64::INFINITY,
        min_eigenvalue_f_phi: f64::INFINITY,
        violations: 0,
        tolerance: VIOLATION_TOLERANCE,
    };
    let mut accepted = 0;
    while accepted < samples {
        report.draws += 1;
        let x = rng.uniform_range(-4.0, 0.0);
        let s = rng.uniform_range(x, -x);
        let t = rng.uniform_range(x - 1.0, 1.0 - x);
        let p = LemmaFParams::new(0.5 * (s + t), 0.5 * (s - t), x);
        if !p.is_admissible() {
            continue;
        }
        accepted += 1;
        let u = rng.uniform_range(0.0, std::f64::consts::TAU);
        let v = rng.uniform_range(0.0, std::f64::consts::PI);
        let (f, f_phi) = lemma_f_matrices(p, u, v);
        let lo_f = f.min_eigenvalue()?;
        let lo = f_phi.min_eigenvalue()?;
        report.min_eigenvalue_f = report.min_eigenvalue_f.min(lo_f);
        report.min_eigenvalue_f_phi = report.min_eigenvalue_f_phi.min(lo);
        if lo < -VIOLATION_TOLERANCE {
            report.violations += 1;
        }
    }
    Ok(report)
}
