use approx::assert_abs_diff_eq;
use proptest::prelude::*;

use compcorr::bases::{
    computational_basis, fourier_basis, linear_observable, prime_d_mubs, qubit_pauli_mubs, rotate_basis,
    unbiasedness_deviation, MubPair, Observable,
};
use compcorr::correlations::{
    conditional, conditioned_state, full_report, joint_distribution, mutual_information, outcome_distribution,
    pearson, shannon_entropy,
};
use compcorr::criteria::{
    analyze, mi3_criterion, mi_criterion, ppt_oracle, witness_operators, Verdict,
};
use compcorr::experiments::montecarlo::{Detector, MontecarloSpec};
use compcorr::experiments::{run_basis_optimization, run_montecarlo, OptimizationMode, OptimizationSpec};
use compcorr::qmat::{
    hermitian_eigendecomposition, hermitian_eigenvalues, partial_trace, partial_transpose, BipartiteState,
    DensityMatrix, Subsystem,
};
use compcorr::states::{
    haar_unitary, random_bipartite, random_density_matrix, separable_mixture, RngStream, StateEnsemble,
    SEPARABLE_COMPONENTS,
};

fn ensemble() -> impl Strategy<Value = StateEnsemble> {
    prop_oneof![Just(StateEnsemble::HilbertSchmidt), Just(StateEnsemble::UniformSpectrum)]
}

fn state(seed: u64, d: usize, e: StateEnsemble) -> BipartiteState {
    random_bipartite(e, d, &mut RngStream::new(seed, 0)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_states_are_density_matrices(seed in any::<u64>(), d in 2usize..=3, e in ensemble()) {
        let s = state(seed, d, e);
        let m = s.matrix();
        prop_assert!(m.hermiticity_deviation() < 1e-12);
        prop_assert!((m.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(hermitian_eigenvalues(m).unwrap()[0] > -1e-12);
        prop_assert!(DensityMatrix::new(m.clone()).is_ok());
    }

    #[test]
    fn eigendecomposition_reconstructs(seed in any::<u64>(), n in 2usize..=9) {
        let m = random_density_matrix(n, &mut RngStream::new(seed, 1)).unwrap();
        let eig = hermitian_eigendecomposition(m.matrix()).unwrap();
        prop_assert!(eig.reconstruct().max_abs_diff(m.matrix()) < 1e-10);
        prop_assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn partial_operations(seed in any::<u64>(), d in 2usize..=3) {
        let s = state(seed, d, StateEnsemble::HilbertSchmidt);
        let pt = partial_transpose(&s, Subsystem::B);
        let twice = partial_transpose(&BipartiteState::new(d, DensityMatrix::new(pt.clone()).unwrap_or_else(|_| s.state().clone())).unwrap(), Subsystem::B);
        if DensityMatrix::new(pt.clone()).is_ok() {
            prop_assert!(twice.max_abs_diff(s.matrix()) < 1e-14);
        }
        // partial transposes over A and B are related by full transposition
        prop_assert!(partial_transpose(&s, Subsystem::A).max_abs_diff(&pt.transpose()) < 1e-14);
        for keep in [Subsystem::A, Subsystem::B] {
            let r = partial_trace(&s, keep);
            prop_assert!((r.matrix().trace().re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn report_bounds(seed in any::<u64>(), d in prop::sample::select(vec![2usize, 3, 5]), e in ensemble()) {
        let s = state(seed, d, e);
        let mubs = prime_d_mubs(d).unwrap();
        let r = full_report(&s, &mubs).unwrap();
        let log_d = (d as f64).log2();
        for p in &r.pairs {
            prop_assert!(p.mutual_information >= 0.0 && p.mutual_information <= log_d + 1e-9);
            prop_assert!(p.pearson_abs().unwrap() <= 1.0 + 1e-9);
            let sv = p.conditional_sum.unwrap();
            prop_assert!((0.0..=d as f64 + 1e-9).contains(&sv));
            prop_assert!((mutual_information(&p.joint) - mutual_information(&p.joint.transposed())).abs() < 1e-12);
        }
        for (x, y) in r.pairs.iter().zip(r.pairs.iter().skip(1)) {
            for (a, b) in [
                (x.mutual_information, y.mutual_information),
                (x.pearson_abs().unwrap(), y.pearson_abs().unwrap()),
                (x.conditional_sum.unwrap(), y.conditional_sum.unwrap()),
            ] {
                prop_assert!(2.0 * (a * b).sqrt() <= a + b + 1e-12);
            }
        }
    }

    #[test]
    fn conditioned_state_consistency(seed in any::<u64>(), d in 2usize..=3) {
        let s = state(seed, d, StateEnsemble::UniformSpectrum);
        let a = computational_basis(d).unwrap();
        let b = fourier_basis(d).unwrap();
        let j = joint_distribution(&s, &a, &b).unwrap();
        for k in 0..d {
            let rho = conditioned_state(&s, &b, k).unwrap();
            for i in 0..d {
                prop_assert!((rho.expectation(&a.projector(i)).re - conditional(&j, i, k).unwrap()).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn pearson_modulus_bounded(seed in any::<u64>(), d in 2usize..=3) {
        let mut rng = RngStream::new(seed, 2);
        let s = random_bipartite(StateEnsemble::HilbertSchmidt, d, &mut rng).unwrap();
        let obs = |rng: &mut RngStream| {
            let basis = rotate_basis(&computational_basis(d).unwrap(), &haar_unitary(d, rng)).unwrap();
            let values = (0..d).map(|_| rng.gaussian()).collect();
            Observable::new(basis, values).unwrap()
        };
        let (x, y) = (obs(&mut rng), obs(&mut rng));
        prop_assert!(pearson(&s, &x, &y).unwrap().norm() <= 1.0 + 1e-9);
    }

    #[test]
    fn entropic_uncertainty(seed in any::<u64>(), d in 2usize..=5) {
        let rho = random_density_matrix(d, &mut RngStream::new(seed, 3)).unwrap();
        let h = |b| shannon_entropy(&outcome_distribution(&rho, b));
        let (z, f) = (computational_basis(d).unwrap(), fourier_basis(d).unwrap());
        prop_assert!(h(&z) + h(&f) >= (d as f64).log2() - 1e-9);
    }

    #[test]
    fn witness_linearity(s1 in any::<u64>(), s2 in any::<u64>(), lambda in 0.0f64..=1.0) {
        let (a, b) = (state(s1, 2, StateEnsemble::HilbertSchmidt), state(s2, 2, StateEnsemble::UniformSpectrum));
        let mix = DensityMatrix::mixture(&[(lambda, a.state()), (1.0 - lambda, b.state())]).unwrap();
        let mix = BipartiteState::new(2, mix).unwrap();
        for w in witness_operators() {
            let lin = lambda * w.expectation(&a) + (1.0 - lambda) * w.expectation(&b);
            prop_assert!((w.expectation(&mix) - lin).abs() < 1e-12);
        }
    }

    #[test]
    fn separable_states_pass_everything(seed in any::<u64>()) {
        let s = separable_mixture(2, SEPARABLE_COMPONENTS, &mut RngStream::new(seed, 4)).unwrap();
        prop_assert!(!ppt_oracle(&s).detected_entangled);
        let a = analyze(&s, &qubit_pauli_mubs()).unwrap();
        for v in &a.verdicts {
            prop_assert!(!v.detected_entangled, "{} fired on a separable state", v.detector);
        }
        for w in witness_operators() {
            prop_assert!(w.expectation(&s) >= -1e-9);
        }
    }

    #[test]
    fn verdict_margin_sign(seed in any::<u64>()) {
        let s = state(seed, 2, StateEnsemble::UniformSpectrum);
        let a = analyze(&s, &qubit_pauli_mubs()).unwrap();
        for v in a.verdicts.iter().chain(&a.witnesses) {
            prop_assert_eq!(v.detected_entangled, v.margin > 0.0);
        }
    }

    #[test]
    fn mi3_extends_mi(seed in any::<u64>()) {
        let s = state(seed, 2, StateEnsemble::UniformSpectrum);
        let pauli = qubit_pauli_mubs();
        let r3 = full_report(&s, &pauli).unwrap();
        let r2 = full_report(&s, &pauli.truncated(2)).unwrap();
        if mi_criterion(&r2, 2).unwrap().detected_entangled {
            prop_assert!(mi3_criterion(&r3).unwrap().detected_entangled);
        }
    }

    #[test]
    fn rotated_mub_pairs_stay_unbiased(seed in any::<u64>(), d in 2usize..=5) {
        let u = haar_unitary(d, &mut RngStream::new(seed, 5));
        let pair = MubPair::standard(d).unwrap().rotated(&u).unwrap();
        prop_assert!(unbiasedness_deviation(&pair.first, &pair.second) < 1e-9);
    }
}

#[test]
fn prime_mub_sets_are_complete_and_unbiased() {
    for d in [2, 3, 5, 7, 11, 13] {
        let set = prime_d_mubs(d).unwrap();
        assert_eq!(set.len(), d + 1);
        for i in 0..set.len() {
            for j in i + 1..set.len() {
                assert!(unbiasedness_deviation(set.basis(i), set.basis(j)) < 1e-9);
            }
        }
    }
}

#[test]
fn three_mub_qubit_entropy_bound() {
    let mut rng = RngStream::new(99, 0);
    let pauli = qubit_pauli_mubs();
    for _ in 0..2000 {
        let rho = random_density_matrix(2, &mut rng).unwrap();
        let h: f64 = pauli.bases().iter().map(|b| shannon_entropy(&outcome_distribution(&rho, b))).sum();
        assert!(h >= 2.0 - 1e-9);
    }
}

#[test]
fn linear_observable_pearson_matches_report() {
    let mut rng = RngStream::new(5, 0);
    let set = prime_d_mubs(3).unwrap();
    for _ in 0..10 {
        let s = random_bipartite(StateEnsemble::UniformSpectrum, 3, &mut rng).unwrap();
        let r = full_report(&s, &set).unwrap();
        for (p, b) in r.pairs.iter().zip(set.bases()) {
            let op = pearson(&s, &linear_observable(b), &linear_observable(b)).unwrap();
            assert_abs_diff_eq!(p.pearson_abs().unwrap(), op.norm(), epsilon = 1e-10);
        }
    }
}

#[test]
fn montecarlo_is_thread_independent_and_consistent() {
    let mut spec = MontecarloSpec::new(10_000, 3);
    spec.detectors = Detector::ALL.to_vec();
    spec.threads = Some(1);
    let a = run_montecarlo(&spec).unwrap();
    spec.threads = Some(4);
    let b = run_montecarlo(&spec).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.venn[1..].iter().sum::<u64>(), a.union_detected());
    assert_eq!(a.total_false_positives(), 0);
    let projected = a.project(&Detector::TABLE).unwrap();
    assert_eq!(projected.venn.iter().sum::<u64>(), a.n_entangled);
}

#[test]
fn optimization_fraction_is_monotone() {
    let mut spec = OptimizationSpec::new(
        4000,
        vec![OptimizationMode::Fixed, OptimizationMode::OptimizeSecond, OptimizationMode::OptimizeBoth],
        8,
    );
    spec.threads = Some(2);
    let s = run_basis_optimization(&spec).unwrap();
    let f: Vec<u64> = s.modes.iter().map(|m| m.detected_entangled).collect();
    assert!(f[0] <= f[1] && f[1] <= f[2], "{f:?}");
    assert!(s.modes.iter().all(|m| m.detected_separable == 0));
}

#[test]
fn boundary_verdicts_are_not_detections() {
    let v = Verdict::above(compcorr::criteria::Criterion::PearsonSum(2), 1.0 + 5e-10, 1.0);
    assert_eq!((v.margin, v.detected_entangled), (0.0, false));
    let v = Verdict::above(compcorr::criteria::Criterion::PearsonSum(2), 1.0 + 2e-9, 1.0);
    assert!(v.detected_entangled && v.margin > 0.0);
}
