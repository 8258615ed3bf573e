use proptest::prelude::*;
use qot_core::linalg::ComplexMatrix;
use qot_core::quantum::{
    cyclic_shift, extremal_qubit_channel, haar_unitary, qutrit_unitaries, random_channel_choi, random_hermitian,
    random_mixed_unitary, random_state, sample_extremal_channel, unitarity_defect, ExtremalQubitChannelParams,
    QuantumChannel, RngStream,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn choi_and_kraus_agree(n in 2usize..=4, kfrac in 0.0f64..1.0, seed in any::<u64>()) {
        let mut rng = RngStream::new(seed, 0);
        let k = 1 + ((n * n) as f64 * kfrac) as usize;
        let k = k.min(n * n);
        let ch = random_channel_choi(n, k, &mut rng).unwrap();
        prop_assert!(ch.is_cptp(1e-10).unwrap());
        let rebuilt = QuantumChannel::from_choi(ch.choi(), n, n).unwrap();
        let rho = random_state(n, n, &mut rng).unwrap();
        let a = ch.apply(&rho).unwrap();
        let b = rebuilt.apply(&rho).unwrap();
        let c = ch.apply_choi(&rho).unwrap();
        prop_assert!((a.as_matrix() - b.as_matrix()).max_abs() < 1e-10);
        prop_assert!((a.as_matrix() - c.as_matrix()).max_abs() < 1e-10);
        prop_assert!((a.hermitian().trace() - 1.0).abs() < 1e-12);
    }

    // Tr(Phi(X) Y) = Tr(X Phi*(Y)).
    #[test]
    fn dual_is_adjoint(n in 2usize..=4, seed in any::<u64>()) {
        let mut rng = RngStream::new(seed, 1);
        let ch = random_channel_choi(n, n, &mut rng).unwrap();
        let x = random_hermitian(n, &mut rng);
        let y = random_hermitian(n, &mut rng);
        let lhs = ch.apply_hermitian(&x).unwrap().trace_product(&y);
        let rhs = x.trace_product(&ch.dual_apply(&y).unwrap());
        prop_assert!((lhs - rhs).abs() < 1e-10 * (1.0 + lhs.abs()));
        // unital dual
        let one = ch.dual_apply(&qot_core::HermitianMatrix::identity(n)).unwrap();
        prop_assert!((one.as_matrix() - &ComplexMatrix::identity(n)).max_abs() < 1e-12);
    }

    #[test]
    fn haar_unitaries_are_unitary(n in 1usize..=8, seed in any::<u64>()) {
        prop_assert!(unitarity_defect(&haar_unitary(n, &mut RngStream::new(seed, 2))) < 1e-13);
    }

    #[test]
    fn sampled_channels_are_cptp(n in 2usize..=4, seed in any::<u64>()) {
        let mut rng = RngStream::new(seed, 3);
        prop_assert!(sample_extremal_channel(n, &mut rng).unwrap().is_cptp(1e-10).unwrap());
        prop_assert!(random_mixed_unitary(n, 3, &mut rng).unwrap().is_cptp(1e-10).unwrap());
    }

    #[test]
    fn composition_matches_sequential_application(seed in any::<u64>()) {
        let mut rng = RngStream::new(seed, 4);
        let f = random_channel_choi(3, 2, &mut rng).unwrap();
        let g = random_channel_choi(3, 5, &mut rng).unwrap();
        let rho = random_state(3, 3, &mut rng).unwrap();
        let seq = g.apply(&f.apply(&rho).unwrap()).unwrap();
        let fg = f.then(&g).unwrap().apply(&rho).unwrap();
        prop_assert!((seq.as_matrix() - fg.as_matrix()).max_abs() < 1e-12);
    }
}

#[test]
fn qubit_family_dual_on_pauli_z() {
    // Phi*(s3) = diag(cos(u - v), -cos(u + v)), from K1, K2 directly.
    for &(u, v) in &[(0.3, 0.2), (2.0, 1.1), (5.5, 3.0)] {
        let ch = extremal_qubit_channel(ExtremalQubitChannelParams { u, v });
        let z = ch.dual_apply(&qot_core::HermitianMatrix::diag(&[1.0, -1.0])).unwrap();
        assert!((z.get(0, 0).re - f64::cos(u - v)).abs() < 1e-14);
        assert!((z.get(1, 1).re + f64::cos(u + v)).abs() < 1e-14);
        assert!(z.get(0, 1).norm() < 1e-15);
    }
}

#[test]
fn named_unitaries_are_permutations() {
    for u in qutrit_unitaries() {
        assert!(unitarity_defect(&u) < 1e-15);
        assert!((&u.matmul(&u) - &ComplexMatrix::identity(3)).max_abs() < 1e-15);
    }
    let s = cyclic_shift(4, 1);
    let mut p = ComplexMatrix::identity(4);
    for _ in 0..4 {
        p = p.matmul(&s);
    }
    assert!((&p - &ComplexMatrix::identity(4)).max_abs() < 1e-15);
}
