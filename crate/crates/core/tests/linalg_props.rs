use num_complex::Complex64;
use proptest::prelude::*;
use qot_core::linalg::{
    eigh, fast_eigh, partial_trace, partial_trace_matrix, tensor, ComplexMatrix, HermitianMatrix, Subsystem,
};
use qot_core::quantum::{random_hermitian, random_state, BlochState, RngStream};

fn max_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    (a - b).max_abs()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigh_reconstructs(n in 1usize..=16, seed in any::<u64>()) {
        let h = random_hermitian(n, &mut RngStream::new(seed, 0));
        let e = eigh(&h).unwrap();
        let scale = h.frobenius_norm().max(1.0);
        prop_assert!(max_diff(&e.reconstruct(), h.as_matrix()) < 1e-12 * scale);
        let v = &e.eigenvectors;
        prop_assert!(max_diff(&v.adjoint_mul(v), &ComplexMatrix::identity(n)) < 1e-12);
        prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn fast_and_jacobi_spectra_agree(n in 1usize..=16, seed in any::<u64>()) {
        let h = random_hermitian(n, &mut RngStream::new(seed, 1));
        let a = eigh(&h).unwrap().eigenvalues;
        let f = fast_eigh(h.as_matrix()).unwrap();
        let scale = h.frobenius_norm().max(1.0);
        for (x, y) in a.iter().zip(&f.eigenvalues) {
            prop_assert!((x - y).abs() < 1e-12 * scale);
        }
        prop_assert!(max_diff(&f.reconstruct(), h.as_matrix()) < 1e-12 * scale);
    }

    #[test]
    fn partial_trace_of_product(da in 1usize..=4, db in 1usize..=4, seed in any::<u64>()) {
        let mut rng = RngStream::new(seed, 2);
        let a = random_state(da, da, &mut rng).unwrap();
        let b = random_state(db, db, &mut rng).unwrap();
        let ab = tensor(a.hermitian(), b.hermitian());
        let ta = partial_trace(&ab, (da, db), Subsystem::B).unwrap();
        let tb = partial_trace(&ab, (da, db), Subsystem::A).unwrap();
        prop_assert!(max_diff(ta.as_matrix(), a.as_matrix()) < 1e-14);
        prop_assert!(max_diff(tb.as_matrix(), b.as_matrix()) < 1e-14);
    }

    // Tr(Tr_B(X) Y) = Tr(X (Y (x) 1)) for arbitrary complex X.
    #[test]
    fn partial_trace_is_adjoint_to_tensoring(da in 1usize..=3, db in 1usize..=3, seed in any::<u64>()) {
        let mut rng = RngStream::new(seed, 3);
        let x = ComplexMatrix::from_fn(da * db, da * db, |_, _| rng.complex_gaussian());
        let ya = ComplexMatrix::from_fn(da, da, |_, _| rng.complex_gaussian());
        let yb = ComplexMatrix::from_fn(db, db, |_, _| rng.complex_gaussian());
        let lhs_a = partial_trace_matrix(&x, (da, db), Subsystem::B).unwrap().trace_of_product(&ya);
        let rhs_a = x.trace_of_product(&ya.kron(&ComplexMatrix::identity(db)));
        let lhs_b = partial_trace_matrix(&x, (da, db), Subsystem::A).unwrap().trace_of_product(&yb);
        let rhs_b = x.trace_of_product(&ComplexMatrix::identity(da).kron(&yb));
        prop_assert!((lhs_a - rhs_a).norm() < 1e-11);
        prop_assert!((lhs_b - rhs_b).norm() < 1e-11);
    }

    #[test]
    fn bloch_round_trip(r in 0.0f64..=1.0, theta in 0.0f64..std::f64::consts::PI) {
        let rho = BlochState::new(r, theta).unwrap().to_density();
        let back = BlochState::from_density(&rho).unwrap();
        let again = back.to_density();
        prop_assert!(max_diff(again.as_matrix(), rho.as_matrix()) < 1e-14);
        prop_assert!((0.0..std::f64::consts::PI).contains(&back.theta));
    }
}

#[test]
fn psd_sqrt_squares_back() {
    let rho = random_state(4, 2, &mut RngStream::new(5, 0)).unwrap();
    let s = rho.hermitian().psd_sqrt().unwrap();
    assert!(max_diff(&s.matmul(&s), rho.as_matrix()) < 1e-12);
}

#[test]
fn degenerate_spectrum() {
    let psi = [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8), Complex64::new(0.0, 0.0)];
    let p = HermitianMatrix::projector(&psi);
    let e = eigh(&p).unwrap();
    assert!(e.eigenvalues[0].abs() < 1e-15 && e.eigenvalues[1].abs() < 1e-15);
    assert!((e.eigenvalues[2] - 1.0).abs() < 1e-15);
}
