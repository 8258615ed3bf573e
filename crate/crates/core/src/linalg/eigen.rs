//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a[p][q]` with a
//! diagonal unitary and then applies the real symmetric Jacobi rotation,
//! so the pivot is annihilated exactly. Sweeps visit `(p, q)` in row order,
//! which makes the result a deterministic function of the input.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ZERO};
use crate::config::TOL;
use crate::error::{Error, Result};

/// Eigenvalues in ascending order with the matching unitary eigenvector matrix
/// (eigenvectors are columns).
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// `V diag(f(lambda)) V^dag`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.rows();
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &w) in fl.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|l| l)
    }
}

/// Full decomposition. Only the Hermitian part of `a` is used.
pub fn jacobi_eigh(a: &ComplexMatrix) -> Result<EigenDecomposition> {
    let (values, vectors) = jacobi(a, true)?;
    Ok(EigenDecomposition { eigenvalues: values, eigenvectors: vectors.expect("requested") })
}

/// Ascending eigenvalues without accumulating eigenvectors.
pub fn jacobi_eigenvalues(a: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(jacobi(a, false)?.0)
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for p in 0..n {
        for q in (p + 1)..n {
            s += a[(p, q)].norm_sqr();
        }
    }
    (2.0 * s).sqrt()
}

fn jacobi(a: &ComplexMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<ComplexMatrix>)> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!("eigh of a {}x{} matrix", a.rows(), a.cols())));
    }
    let n = a.rows();
    let mut w = a.hermitian_part();
    let mut v = want_vectors.then(|| ComplexMatrix::identity(n));
    let threshold = TOL.jacobi_off_diagonal * w.frobenius_norm();

    let mut converged = false;
    let mut residual = off_diagonal_norm(&w);
    for _sweep in 0..TOL.jacobi_max_sweeps {
        if residual <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut w, v.as_mut(), p, q);
            }
        }
        residual = off_diagonal_norm(&w);
    }
    if !converged && residual > threshold {
        return Err(Error::EigenNotConverged { sweeps: TOL.jacobi_max_sweeps, residual });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| w[(i, i)].re.total_cmp(&w[(j, j)].re));
    let values = order.iter().map(|&i| w[(i, i)].re).collect();
    let vectors = v.map(|v| ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]));
    Ok((values, vectors))
}

#[inline]
fn rotate(w: &mut ComplexMatrix, v: Option<&mut ComplexMatrix>, p: usize, q: usize) {
    let apq = w[(p, q)];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let app = w[(p, p)].re;
    let aqq = w[(q, q)].re;
    // Pivot already negligible next to both diagonal entries.
    if g < f64::EPSILON * 1e-3 * (app.abs() + aqq.abs()) {
        w[(p, q)] = ZERO;
        w[(q, p)] = ZERO;
        return;
    }
    let theta = (aqq - app) / (2.0 * g);
    let t =
        if theta.abs() > 1e150 { 0.5 / theta } else { theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt()) };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    // phase = e^{-i phi} with a_pq = g e^{i phi}
    let phase = apq.conj() / g;
    let jpp = Complex64::new(c, 0.0);
    let jpq = Complex64::new(s, 0.0);
    let jqp = phase * (-s);
    let jqq = phase * c;

    let n = w.rows();
    for k in 0..n {
        let akp = w[(k, p)];
        let akq = w[(k, q)];
        w[(k, p)] = akp * jpp + akq * jqp;
        w[(k, q)] = akp * jpq + akq * jqq;
    }
    for k in 0..n {
        let apk = w[(p, k)];
        let aqk = w[(q, k)];
        w[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        w[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    w[(p, q)] = ZERO;
    w[(q, p)] = ZERO;
    w[(p, p)] = Complex64::new(w[(p, p)].re, 0.0);
    w[(q, q)] = Complex64::new(w[(q, q)].re, 0.0);

    if let Some(v) = v {
        for k in 0..n {
            let vkp = v[(k, p)];
            let vkq = v[(k, q)];
            v[(k, p)] = vkp * jpp + vkq * jqp;
            v[(k, q)] = vkp * jpq + vkq * jqq;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_input_is_sorted() {
        let d = ComplexMatrix::diag_real(&[3.0, 1.0, 2.0]);
        let e = jacobi_eigh(&d).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 2.0, 3.0]);
        assert!((&e.reconstruct() - &d).frobenius_norm() < 1e-15);
    }

    #[test]
    fn complex_two_by_two() {
        // sigma_2 has eigenvalues -1, 1
        let s2 = ComplexMatrix::from_vec(2, 2, vec![ZERO, Complex64::new(0.0, -1.0), Complex64::new(0.0, 1.0), ZERO])
            .unwrap();
        let e = jacobi_eigh(&s2).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-15);
        let recon = e.reconstruct();
        assert!((&recon - &s2).frobenius_norm() < 1e-14);
    }

    #[test]
    fn zero_and_scalar_matrices() {
        let z = ComplexMatrix::zeros(4, 4);
        assert_eq!(jacobi_eigenvalues(&z).unwrap(), vec![0.0; 4]);
        let one = ComplexMatrix::diag_real(&[5.0]);
        assert_eq!(jacobi_eigenvalues(&one).unwrap(), vec![5.0]);
    }

    #[test]
    fn rejects_rectangular() {
        assert!(jacobi_eigh(&ComplexMatrix::zeros(2, 3)).is_err());
    }
}
