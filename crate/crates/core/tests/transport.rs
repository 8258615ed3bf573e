use num_complex::Complex64;
use proptest::prelude::*;
use qot_core::cost::{cost_from_classical, projector_cost, ClassicalCost};
use qot_core::quantum::{haar_unitary, random_state, BlochState, DensityMatrix, RngStream};
use qot_core::qubit::{tq_commuting, tq_isospectral, tq_semianalytic};
use qot_core::sdp::{
    check_dual_feasible, solve, swap_fidelity, transport_cost, wasserstein, Objective, SolverOptions, TransportProblem,
};
use qot_core::Error;

fn certified(a: &DensityMatrix, b: &DensityMatrix) -> f64 {
    let sol = solve(
        &TransportProblem::new(a.clone(), b.clone(), projector_cost(a.dim()), Objective::Linear).unwrap(),
        &SolverOptions::default(),
    )
    .unwrap();
    assert!(sol.is_optimal(), "{:?}", sol.status);
    assert!(sol.gap.abs() <= 1e-7 && sol.marginal_residual <= 1e-8);
    sol.value
}

fn overlap(psi: &[Complex64], phi: &[Complex64]) -> f64 {
    psi.iter().zip(phi).map(|(a, b)| a.conj() * b).sum::<Complex64>().norm_sqr()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // Product states are the only couplings of two pure states.
    #[test]
    fn pure_pair_closed_form(n in 2usize..=4, seed in any::<u64>()) {
        let mut rng = RngStream::new(seed, 0);
        let psi: Vec<Complex64> = (0..n).map(|_| rng.complex_gaussian()).collect();
        let phi: Vec<Complex64> = (0..n).map(|_| rng.complex_gaussian()).collect();
        let norm = |v: &[Complex64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let psi: Vec<Complex64> = psi.iter().map(|z| z / norm(&psi)).collect();
        let phi: Vec<Complex64> = phi.iter().map(|z| z / norm(&phi)).collect();
        let t = certified(&DensityMatrix::pure(&psi).unwrap(), &DensityMatrix::pure(&phi).unwrap());
        prop_assert!((t - 0.5 * (1.0 - overlap(&psi, &phi))).abs() < 1e-8);
    }

    // The purification sum_i sqrt(l_i) |i>|i> is symmetric, so the self cost vanishes.
    #[test]
    fn self_cost_vanishes(n in 2usize..=4, k in 1usize..=4, seed in any::<u64>()) {
        let rho = random_state(n, k.min(n), &mut RngStream::new(seed, 1)).unwrap();
        prop_assert!(certified(&rho, &rho).abs() < 1e-8);
    }

    #[test]
    fn unitary_covariance_and_symmetry(n in 2usize..=4, seed in any::<u64>()) {
        let mut rng = RngStream::new(seed, 2);
        let a = random_state(n, n, &mut rng).unwrap();
        let b = random_state(n, n, &mut rng).unwrap();
        let u = haar_unitary(n, &mut rng);
        let t = certified(&a, &b);
        prop_assert!((certified(&a.conjugate_by(&u), &b.conjugate_by(&u)) - t).abs() < 1e-7);
        prop_assert!((certified(&b, &a) - t).abs() < 1e-7);
        prop_assert!((0.0..=0.5).contains(&t));
    }

    // Any dual feasible pair bounds the primal value of any coupling; the product is one.
    #[test]
    fn weak_duality(n in 2usize..=4, seed in any::<u64>()) {
        let mut rng = RngStream::new(seed, 3);
        let a = random_state(n, n, &mut rng).unwrap();
        let b = random_state(n, n, &mut rng).unwrap();
        let cost = projector_cost(n);
        let sol = solve(&TransportProblem::new(a.clone(), b.clone(), cost.clone(), Objective::Linear).unwrap(), &SolverOptions::default()).unwrap();
        let (ok, lo) = check_dual_feasible(&sol.dual.sigma_a, &sol.dual.sigma_b, &cost).unwrap();
        prop_assert!(ok, "dual min eigenvalue {lo}");
        let dual = sol.dual.sigma_a.trace_product(a.hermitian()) + sol.dual.sigma_b.trace_product(b.hermitian());
        let product = cost.mat.trace_product(&a.tensor(&b).into_hermitian());
        prop_assert!(dual <= product + 1e-9);
        prop_assert!(dual <= sol.primal_value + 1e-9);
        prop_assert!((dual - sol.dual_value).abs() < 1e-9);
    }

    #[test]
    fn qubit_solver_matches_semianalytic(s in 0.0f64..=1.0, r in 0.0f64..=1.0, theta in 0.0f64..std::f64::consts::TAU) {
        let a = BlochState::new(s, 0.0).unwrap().to_density();
        let b = BlochState::new(r, theta).unwrap().to_density();
        prop_assert!((certified(&a, &b) - tq_semianalytic(s, r, theta)).abs() < 1e-6);
    }
}

#[test]
fn qubit_special_families() {
    for &(s, r) in &[(0.1, 0.9), (0.5, 0.2), (0.0, 1.0), (0.3, 0.3)] {
        let a = BlochState::new(s, 0.0).unwrap().to_density();
        let b = BlochState::new(r, 0.0).unwrap().to_density();
        assert!((certified(&a, &b) - tq_commuting(s, r)).abs() < 1e-6);
    }
    for &(r, theta) in &[(0.2, 0.7), (0.9, 2.5), (1.0, 1.0)] {
        let a = BlochState::new(r, 0.0).unwrap().to_density();
        let b = BlochState::new(r, theta).unwrap().to_density();
        assert!((certified(&a, &b) - tq_isospectral(r, theta)).abs() < 1e-6);
    }
}

#[test]
fn basis_states_under_classical_cost() {
    let e = ClassicalCost::new(3, vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0], vec![2.0, 1.0, 0.0]]).unwrap();
    let linear = cost_from_classical(&e, 1).unwrap();
    let squared = cost_from_classical(&e, 2).unwrap();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let a = DensityMatrix::basis(3, i).unwrap();
        let b = DensityMatrix::basis(3, j).unwrap();
        // <ij| P_ij |ij> = 1/2 for the antisymmetric projector on {i, j}.
        let eij = e.get(i, j);
        assert!((transport_cost(&a, &b, &linear).unwrap() - 0.5 * eij).abs() < 1e-8);
        assert!((transport_cost(&a, &b, &squared).unwrap() - 0.5 * eij * eij).abs() < 1e-8);
        assert!((wasserstein(&a, &b, &e).unwrap() - (0.5f64).sqrt() * eij).abs() < 1e-8);
    }
}

#[test]
fn swap_fidelity_relation() {
    let mut rng = RngStream::new(9, 0);
    let a = random_state(3, 3, &mut rng).unwrap();
    let b = random_state(3, 2, &mut rng).unwrap();
    let t = certified(&a, &b);
    assert!((swap_fidelity(&a, &b).unwrap() - (1.0 - 2.0 * t)).abs() < 1e-12);
}

#[test]
fn near_singular_marginals_still_certify() {
    let mut rng = RngStream::new(17, 0);
    for eps in [1e-4, 1e-8, 1e-11] {
        let pure = random_state(3, 1, &mut rng).unwrap();
        let a = pure.mix(&DensityMatrix::maximally_mixed(3), eps).unwrap();
        let b = random_state(3, 3, &mut rng).unwrap();
        let t = certified(&a, &b);
        assert!(t.is_finite() && t >= 0.0);
    }
}

#[test]
fn rejects_bad_problems() {
    let a = DensityMatrix::maximally_mixed(2);
    let b = DensityMatrix::maximally_mixed(3);
    assert!(matches!(
        TransportProblem::new(a.clone(), b, projector_cost(2), Objective::Linear),
        Err(Error::DimensionMismatch(_))
    ));
    let big = DensityMatrix::maximally_mixed(9);
    let p = TransportProblem::new(big.clone(), big, projector_cost(9), Objective::Linear).unwrap();
    assert!(matches!(solve(&p, &SolverOptions::default()), Err(Error::DimensionCap { .. })));
}
