//! Primal-dual interior-point method for
//!
//! ```text
//! min Re Tr(C X)  s.t.  A(X) = b,  X >= 0        (X Hermitian, d x d)
//! max b.y         s.t.  Z = C - A*(y) >= 0
//! ```
//!
//! Mehrotra predictor-corrector with Nesterov-Todd scaling, carried out
//! directly in complex Hermitian arithmetic. With `X = L L^dag` and
//! `L^dag Z L = V S^2 V^dag`, the scaling `G = L V S^{-1/2}` maps both `X` and
//! `Z` to the diagonal `S`, and `W = G G^dag` satisfies `W Z W = X`.
//! The dual iterate starts exactly feasible and stays so up to rounding.

use num_complex::Complex64;

use super::constraints::MarginalConstraints;
use crate::linalg::{
    cholesky, cholesky_real, cholesky_real_solve, fast_eigenvalues, fast_eigh, lower_inverse, ComplexMatrix,
};

#[derive(Debug, Clone, Copy)]
pub(crate) struct IpmSettings {
    pub tol_gap: f64,
    pub tol_feas: f64,
    pub max_iter: usize,
    /// Acceptance thresholds for falling back to the best iterate.
    pub certified_gap: f64,
    pub certified_feas: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum IpmOutcome {
    /// Stopping rule met.
    Converged,
    /// Stopping rule missed but the best iterate meets the certification thresholds.
    Certified,
    MaxIter,
    NumericalFailure,
}

#[derive(Debug, Clone)]
pub(crate) struct IpmResult {
    pub x: ComplexMatrix,
    pub y: Vec<f64>,
    pub iterations: usize,
    pub outcome: IpmOutcome,
}

const REFINEMENT_PASSES: usize = 2;

struct Iterate {
    x: ComplexMatrix,
    y: Vec<f64>,
    z: ComplexMatrix,
}

struct Snapshot {
    x: ComplexMatrix,
    y: Vec<f64>,
    primal: f64,
    dual: f64,
    rp_norm: f64,
    merit: f64,
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `a * b * a` for Hermitian `a`, `b`, symmetrized.
fn sandwich_sym(a: &ComplexMatrix, b: &ComplexMatrix, tmp: &mut ComplexMatrix, out: &mut ComplexMatrix) {
    a.matmul_into(b, tmp);
    tmp.matmul_into(a, out);
    symmetrize(out);
}

fn symmetrize(m: &mut ComplexMatrix) {
    let n = m.rows();
    for i in 0..n {
        m[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let z = 0.5 * (m[(i, j)] + m[(j, i)].conj());
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
}

/// Largest `alpha <= 1` with `S + alpha * D >= 0`, computed from
/// `lambda_min(S^{-1/2} D S^{-1/2})`.
fn step_length(s: &[f64], dt: &ComplexMatrix) -> Option<f64> {
    let n = s.len();
    let isq: Vec<f64> = s.iter().map(|v| 1.0 / v.sqrt()).collect();
    let k = ComplexMatrix::from_fn(n, n, |i, j| dt[(i, j)] * (isq[i] * isq[j]));
    let lo = fast_eigenvalues(&k).ok()?.first().copied()?;
    Some(if lo >= -1.0 { 1.0 } else { -1.0 / lo })
}

pub(crate) fn solve(
    cons: &MarginalConstraints,
    c: &ComplexMatrix,
    b: &[f64],
    x0: ComplexMatrix,
    y0: Vec<f64>,
    opts: &IpmSettings,
) -> IpmResult {
    let d = cons.dim();
    let m = cons.m();
    let mut cur = {
        let z = c - &cons.adjoint(&y0);
        Iterate { x: x0, y: y0, z }
    };
    let mut best: Option<Snapshot> = None;
    let mut tmp = ComplexMatrix::zeros(d, d);
    let mut outcome = IpmOutcome::MaxIter;
    let mut iterations = 0;

    for it in 0..=opts.max_iter {
        iterations = it;
        let ax = cons.apply(&cur.x);
        let rp: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let mut rd = c - &cur.z;
        rd -= &cons.adjoint(&cur.y);
        let primal = c.inner_re(&cur.x);
        let dual: f64 = b.iter().zip(&cur.y).map(|(bi, yi)| bi * yi).sum();
        let mu = cur.x.inner_re(&cur.z) / d as f64;
        let rp_norm = norm2(&rp);
        let gap = primal - dual;
        let merit = (gap.abs() / (1.0 + primal.abs()) / opts.tol_gap).max(rp_norm / opts.tol_feas);
        if !primal.is_finite() || !dual.is_finite() || !mu.is_finite() {
            outcome = IpmOutcome::NumericalFailure;
            break;
        }
        if best.as_ref().is_none_or(|s| merit < s.merit) {
            best = Some(Snapshot { x: cur.x.clone(), y: cur.y.clone(), primal, dual, rp_norm, merit });
        }
        if gap.abs() <= opts.tol_gap * (1.0 + primal.abs()) && rp_norm <= opts.tol_feas {
            outcome = IpmOutcome::Converged;
            break;
        }
        if it == opts.max_iter {
            break;
        }

        // Scaling.
        let Some(l) = cholesky(&cur.x) else {
            outcome = IpmOutcome::NumericalFailure;
            break;
        };
        let lz = l.adjoint_mul(&cur.z);
        let mut p = lz.matmul(&l);
        symmetrize(&mut p);
        let Ok(eig) = fast_eigh(&p) else {
            outcome = IpmOutcome::NumericalFailure;
            break;
        };
        if !(eig.eigenvalues[0] > 0.0) {
            outcome = IpmOutcome::NumericalFailure;
            break;
        }
        let s: Vec<f64> = eig.eigenvalues.iter().map(|w| w.sqrt()).collect();
        let isqrt_s: Vec<f64> = s.iter().map(|v| 1.0 / v.sqrt()).collect();
        let sqrt_s: Vec<f64> = s.iter().map(|v| v.sqrt()).collect();
        let lv = l.matmul(&eig.eigenvectors);
        let g = ComplexMatrix::from_fn(d, d, |i, j| lv[(i, j)] * isqrt_s[j]);
        let vh_linv = eig.eigenvectors.adjoint_mul(&lower_inverse(&l));
        let g_inv = ComplexMatrix::from_fn(d, d, |i, j| vh_linv[(i, j)] * sqrt_s[i]);
        let mut w = g.mul_adjoint(&g);
        symmetrize(&mut w);

        let schur = cons.schur(&w);
        let Some(chol) = cholesky_real(&schur, m) else {
            outcome = IpmOutcome::NumericalFailure;
            break;
        };
        let mut wrdw = ComplexMatrix::zeros(d, d);
        sandwich_sym(&w, &rd, &mut tmp, &mut wrdw);
        let a_wrdw = cons.apply(&wrdw);

        let direction = |rc: &ComplexMatrix, tmp: &mut ComplexMatrix| -> (ComplexMatrix, Vec<f64>, ComplexMatrix) {
            let a_rc = cons.apply(rc);
            let mut dy: Vec<f64> = (0..m).map(|i| rp[i] - a_rc[i] + a_wrdw[i]).collect();
            cholesky_real_solve(&chol, m, &mut dy);
            let mut dz = &rd - &cons.adjoint(&dy);
            let mut wdzw = ComplexMatrix::zeros(d, d);
            sandwich_sym(&w, &dz, tmp, &mut wdzw);
            let mut dx = rc - &wdzw;
            symmetrize(&mut dx);
            for _ in 0..REFINEMENT_PASSES {
                let a_dx = cons.apply(&dx);
                let mut delta: Vec<f64> = (0..m).map(|i| rp[i] - a_dx[i]).collect();
                cholesky_real_solve(&chol, m, &mut delta);
                dy.iter_mut().zip(&delta).for_each(|(a, b)| *a += b);
                let ad = cons.adjoint(&delta);
                sandwich_sym(&w, &ad, tmp, &mut wdzw);
                dx += &wdzw;
            }
            dz = &rd - &cons.adjoint(&dy);
            (dx, dy, dz)
        };
        let scaled = |dx: &ComplexMatrix, dz: &ComplexMatrix| -> (ComplexMatrix, ComplexMatrix) {
            let mut dxt = g_inv.matmul(dx).mul_adjoint(&g_inv);
            let mut dzt = g.adjoint_mul(dz).matmul(&g);
            symmetrize(&mut dxt);
            symmetrize(&mut dzt);
            (dxt, dzt)
        };

        // Predictor.
        let neg_x = cur.x.scale(-1.0);
        let (dx_a, _, dz_a) = direction(&neg_x, &mut tmp);
        let (dxt_a, dzt_a) = scaled(&dx_a, &dz_a);
        let (Some(ap), Some(ad)) = (step_length(&s, &dxt_a), step_length(&s, &dzt_a)) else {
            outcome = IpmOutcome::NumericalFailure;
            break;
        };
        let mut xa = cur.x.clone();
        xa.axpy(ap, &dx_a);
        let mut za = cur.z.clone();
        za.axpy(ad, &dz_a);
        let mu_aff = xa.inner_re(&za) / d as f64;
        let sigma = (mu_aff / mu).clamp(0.0, 1.0).powi(3);

        // Corrector: solve S R + R S = 2 sigma mu I - 2 S^2 - (dXa dZa + dZa dXa).
        let cross = dxt_a.matmul(&dzt_a);
        let rt = ComplexMatrix::from_fn(d, d, |i, j| {
            let mut v = -(cross[(i, j)] + cross[(j, i)].conj());
            if i == j {
                v += Complex64::new(2.0 * sigma * mu - 2.0 * s[i] * s[i], 0.0);
            }
            v / (s[i] + s[j])
        });
        let mut rc = g.matmul(&rt).mul_adjoint(&g);
        symmetrize(&mut rc);
        let (dx, dy, dz) = direction(&rc, &mut tmp);
        let (dxt, dzt) = scaled(&dx, &dz);
        let (Some(ap), Some(ad)) = (step_length(&s, &dxt), step_length(&s, &dzt)) else {
            outcome = IpmOutcome::NumericalFailure;
            break;
        };
        let gamma = 0.9 + 0.09 * ap.min(ad);
        let ap = (gamma * ap).min(1.0);
        let ad = (gamma * ad).min(1.0);
        cur.x.axpy(ap, &dx);
        symmetrize(&mut cur.x);
        cur.y.iter_mut().zip(&dy).for_each(|(a, b)| *a += ad * b);
        cur.z.axpy(ad, &dz);
        symmetrize(&mut cur.z);
    }

    if outcome == IpmOutcome::Converged {
        return IpmResult { x: cur.x, y: cur.y, iterations, outcome };
    }
    let snap = best.expect("at least one iterate is evaluated");
    let certified = (snap.primal - snap.dual).abs() <= opts.certified_gap && snap.rp_norm <= opts.certified_feas;
    IpmResult { x: snap.x, y: snap.y, iterations, outcome: if certified { IpmOutcome::Certified } else { outcome } }
}
