use num_complex::Complex64;

use crate::config::TOL;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianMatrix, Subsystem, ZERO};
use crate::quantum::{DensityMatrix, QuantumChannel, RngStream};

/// Ginibre matrix with independent standard complex Gaussian entries.
pub fn ginibre(rows: usize, cols: usize, rng: &mut RngStream) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| rng.complex_gaussian())
}

/// `X X^dag / Tr(X X^dag)` for an `n x k` Ginibre matrix `X`.
pub fn random_state(n: usize, k: usize, rng: &mut RngStream) -> Result<DensityMatrix> {
    if n == 0 || k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("state rank {k} must lie in 1..={n}")));
    }
    let x = ginibre(n, k, rng);
    DensityMatrix::normalized(HermitianMatrix::new(x.mul_adjoint(&x))?)
}

/// Random Hermitian matrix with Gaussian entries (GUE up to scale).
pub fn random_hermitian(n: usize, rng: &mut RngStream) -> HermitianMatrix {
    HermitianMatrix::new(ginibre(n, n, rng)).expect("square")
}

/// Haar-distributed unitary: Gram-Schmidt on the columns of a Ginibre matrix.
/// Normalizing each column leaves the triangular factor with positive
/// diagonal, which is exactly the phase fix that makes the law Haar.
pub fn haar_unitary(n: usize, rng: &mut RngStream) -> ComplexMatrix {
    loop {
        let g = ginibre(n, n, rng);
        let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
        let mut ok = true;
        for j in 0..n {
            let mut v = g.column(j);
            // two passes of modified Gram-Schmidt keep orthogonality at machine precision
            for _ in 0..2 {
                for q in &cols {
                    let proj: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    for (vi, qi) in v.iter_mut().zip(q) {
                        *vi -= proj * qi;
                    }
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if !(norm > 1e-8) {
                ok = false;
                break;
            }
            v.iter_mut().for_each(|z| *z /= norm);
            cols.push(v);
        }
        if ok {
            return ComplexMatrix::from_fn(n, n, |i, j| cols[j][i]);
        }
    }
}

/// Random channel whose Choi matrix has rank `k`.
///
/// `Y~ = X X^dag` with `X` of size `n^2 x k`, `Y = Tr_1 Y~` (the output factor
/// is traced out) and `rho_Phi = (1 (x) Y^{-1/2}) Y~ (1 (x) Y^{-1/2}) / n`.
/// For `k < n` the partial trace `Y` is singular, so the draw is repeated a few
/// times before giving up.
pub fn random_channel_choi(n: usize, k: usize, rng: &mut RngStream) -> Result<QuantumChannel> {
    if n == 0 || k == 0 || k > n * n {
        return Err(Error::InvalidArgument(format!("Choi rank {k} must lie in 1..={}", n * n)));
    }
    const RETRIES: usize = 16;
    for _ in 0..RETRIES {
        let x = ginibre(n * n, k, rng);
        let yt = HermitianMatrix::new(x.mul_adjoint(&x))?;
        let y = yt.partial_trace((n, n), Subsystem::A)?;
        let e = y.eigh()?;
        let scale = e.eigenvalues.last().copied().unwrap_or(0.0);
        if !(e.eigenvalues[0] > 1e-10 * scale) {
            continue;
        }
        let y_isqrt =
            HermitianMatrix::from_hermitian_unchecked(e.reconstruct_with(|l| 1.0 / l.sqrt()).hermitian_part());
        let lift = ComplexMatrix::identity(n).kron(y_isqrt.as_matrix());
        let choi = yt.conjugate_by(&lift).scale(1.0 / n as f64);
        let choi = DensityMatrix::with_tolerance(choi, 1e-10, TOL.psd)?;
        return QuantumChannel::from_choi(choi, n, n);
    }
    Err(Error::InvalidChannel(format!("partial trace stayed singular after {RETRIES} draws (n = {n}, k = {k})")))
}

/// `sum_i p_i U_i . U_i^dag` with Haar `U_i` and uniform simplex weights.
pub fn random_mixed_unitary(n: usize, terms: usize, rng: &mut RngStream) -> Result<QuantumChannel> {
    if terms == 0 {
        return Err(Error::InvalidArgument("mixed unitary channel needs at least one term".into()));
    }
    let weights = rng.dirichlet_uniform(terms);
    let unitaries: Vec<ComplexMatrix> = (0..terms).map(|_| haar_unitary(n, rng)).collect();
    QuantumChannel::mixed_unitary(&weights, &unitaries)
}

/// Largest deviation of `U^dag U` from the identity.
pub fn unitarity_defect(u: &ComplexMatrix) -> f64 {
    let n = u.cols();
    let mut g = u.adjoint_mul(u);
    for i in 0..n {
        g[(i, i)] -= Complex64::new(1.0, 0.0);
    }
    g.data().iter().fold(0.0_f64, |m, z| if *z == ZERO { m } else { m.max(z.norm()) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_state_for_rank_one() {
        let mut rng = RngStream::new(11, 0);
        let rho = random_state(2, 1, &mut rng).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn full_rank_state() {
        let mut rng = RngStream::new(12, 0);
        let rho = random_state(4, 4, &mut rng).unwrap();
        assert!(rho.hermitian().min_eigenvalue().unwrap() > 0.0);
    }

    #[test]
    fn rank_out_of_range() {
        let mut rng = RngStream::new(0, 0);
        assert!(random_state(3, 4, &mut rng).is_err());
        assert!(random_state(3, 0, &mut rng).is_err());
        assert!(random_channel_choi(2, 5, &mut rng).is_err());
    }

    #[test]
    fn seeded_state_is_reproducible() {
        let a = random_state(3, 2, &mut RngStream::new(5, 9)).unwrap();
        let b = random_state(3, 2, &mut RngStream::new(5, 9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn haar_is_unitary() {
        let mut rng = RngStream::new(3, 0);
        for n in 1..6 {
            assert!(unitarity_defect(&haar_unitary(n, &mut rng)) < 1e-13);
        }
    }

    #[test]
    fn rank_one_choi_is_unitary() {
        let mut rng = RngStream::new(4, 0);
        for n in 2..5 {
            let ch = random_channel_choi(n, 1, &mut rng).unwrap();
            assert_eq!(ch.kraus().len(), 1);
            assert!(unitarity_defect(&ch.kraus()[0]) < 1e-9);
        }
    }

    #[test]
    fn choi_channel_is_trace_preserving() {
        let mut rng = RngStream::new(6, 0);
        for k in [2, 3, 9] {
            let ch = random_channel_choi(3, k, &mut rng).unwrap();
            assert!(ch.is_cptp(1e-9).unwrap());
            let out = ch.apply(&DensityMatrix::maximally_mixed(3)).unwrap();
            assert!((out.hermitian().trace() - 1.0).abs() < 1e-12);
        }
    }
}
