use num_complex::Complex;
use proptest::prelude::*;

use quncert::dynamics::{evolve, Scenario, TimeGrid};
use quncert::hilbert::{inner, ComplexMatrix, HermitianObservable, QuantumState};
use quncert::qstat::{coherence_of_amplitudes, stats};
use quncert::random;
use quncert::toymodel::{analytic_sx_mean, QubitPreset};
use quncert::uncertainty::{overlap_floor, robertson, schrodinger};

fn setup(seed: u64, dim: usize) -> (HermitianObservable<f64>, QuantumState<f64>) {
    let mut rng = random::rng(seed);
    (random::hermitian(&mut rng, dim), random::state(&mut rng, dim))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn eigendecomposition_reconstructs(seed in any::<u64>(), dim in 2usize..=8) {
        let (h, _) = setup(seed, dim);
        let spec = h.eigen().unwrap();
        let scale = h.matrix().frobenius_norm().max(1.0);
        prop_assert!(spec.reconstruct().max_abs_diff(h.matrix()).unwrap() < 1e-12 * scale);
        let gram = spec.gram();
        prop_assert!(gram.max_abs_diff(&ComplexMatrix::identity(dim)).unwrap() < 1e-12);
        prop_assert!(spec.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn propagator_is_unitary(seed in any::<u64>(), dim in 2usize..=8, t in -20.0f64..20.0) {
        let (h, _) = setup(seed, dim);
        let u = h.eigen().unwrap().propagator(t, 1.0).unwrap();
        let uu = u.adjoint().matmul(&u).unwrap();
        prop_assert!(uu.max_abs_diff(&ComplexMatrix::identity(dim)).unwrap() < 1e-12);
    }

    #[test]
    fn propagator_group_property(seed in any::<u64>(), dim in 2usize..=6, t1 in -5.0f64..5.0, t2 in -5.0f64..5.0) {
        let (h, _) = setup(seed, dim);
        let spec = h.eigen().unwrap();
        let lhs = spec.propagator(t1, 0.7).unwrap().matmul(&spec.propagator(t2, 0.7).unwrap()).unwrap();
        let rhs = spec.propagator(t1 + t2, 0.7).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs).unwrap() < 1e-11);
    }

    #[test]
    fn norm_is_preserved(seed in any::<u64>(), dim in 2usize..=6) {
        let (h, psi) = setup(seed, dim);
        let evo = Scenario::with_default_grid(1.0, h, psi, vec![]).unwrap().evolution().unwrap();
        for t in [0.0, 0.37, 5.0, 123.4] {
            prop_assert!((evo.state_at(t).norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn variance_is_nonnegative_and_bounded(seed in any::<u64>(), dim in 2usize..=6) {
        let (a, psi) = setup(seed, dim);
        let s = stats(&a, &psi).unwrap();
        let spec = a.eigen().unwrap();
        prop_assert!(s.variance >= 0.0);
        let half_spread = spec.spread() / 2.0;
        prop_assert!(s.stddev <= half_spread * (1.0 + 1e-12) + 1e-12);
        prop_assert!(s.mean >= spec.min_eigenvalue() - 1e-12 && s.mean <= spec.max_eigenvalue() + 1e-12);
    }

    #[test]
    fn coherence_is_phase_invariant(seed in any::<u64>(), dim in 1usize..=6, phases in prop::collection::vec(0.0f64..6.3, 6)) {
        let (_, psi) = setup(seed, dim);
        let a = psi.amplitudes();
        let rotated: Vec<_> = a.iter().zip(&phases).map(|(z, &p)| z * Complex::from_polar(1.0, p)).collect();
        let c1 = coherence_of_amplitudes(a);
        let c2 = coherence_of_amplitudes(&rotated);
        prop_assert!((c1.coherence - c2.coherence).abs() < 1e-14);
        prop_assert!((0.0..=1.0).contains(&c1.coherence));
        prop_assert!((c1.coherence.powi(2) + c1.predictability.powi(2) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn global_phase_is_unobservable(seed in any::<u64>(), dim in 2usize..=6, phase in 0.0f64..6.3) {
        let (a, psi) = setup(seed, dim);
        let rotated = psi.with_global_phase(Complex::from_polar(1.0, phase));
        let s1 = stats(&a, &psi).unwrap();
        let s2 = stats(&a, &rotated).unwrap();
        prop_assert!((s1.mean - s2.mean).abs() < 1e-13);
        prop_assert!((s1.variance - s2.variance).abs() < 1e-13);
        prop_assert!((inner(&psi, &rotated).unwrap().norm() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn uncertainty_relations_hold(seed in any::<u64>(), dim in 2usize..=6) {
        let mut rng = random::rng(seed);
        let a: HermitianObservable<f64> = random::hermitian(&mut rng, dim);
        let b = random::hermitian(&mut rng, dim);
        let psi = random::state(&mut rng, dim);
        let r = robertson(&a, &b, &psi).unwrap();
        let s = schrodinger(&a, &b, &psi).unwrap();
        prop_assert!(r.satisfied && s.satisfied);
        prop_assert!(s.rhs >= r.rhs);
    }

    #[test]
    fn overlap_floor_matches_definition(p in 0.0f64..=1.0) {
        let a = [Complex::new(p.sqrt(), 0.0), Complex::new((1.0 - p).sqrt(), 0.0)];
        let expected = (2.0 * p.max(1.0 - p) - 1.0).max(0.0);
        prop_assert!((overlap_floor(&a) - expected).abs() < 1e-15);
    }

    #[test]
    fn qubit_sx_mean_matches_closed_form(p in 0.0f64..=1.0, phase in 0.0f64..6.3, omega in 0.1f64..5.0) {
        let preset = QubitPreset::new(
            omega,
            Complex::new(p.sqrt(), 0.0),
            Complex::from_polar((1.0 - p).sqrt(), phase),
            1.0,
        ).unwrap();
        let sx = quncert::pauli::<f64>(quncert::Axis::X);
        let s = Scenario::new(
            1.0,
            preset.hamiltonian(),
            preset.initial_state(),
            TimeGrid::new(0.0, 10.0, 50).unwrap(),
            vec![("sx".into(), sx)],
        ).unwrap();
        let tr = evolve(&s).unwrap();
        for (t, m) in tr.times.iter().zip(tr.means("sx").unwrap()) {
            prop_assert!((analytic_sx_mean(&preset, *t) - m).abs() < 1e-12);
        }
    }
}

#[test]
fn same_seed_reproduces_output() {
    let (h1, p1) = setup(42, 5);
    let (h2, p2) = setup(42, 5);
    assert_eq!(h1, h2);
    assert_eq!(p1, p2);
    let s1 = h1.eigen().unwrap();
    let s2 = h2.eigen().unwrap();
    assert_eq!(s1.eigenvalues(), s2.eigenvalues());
    assert_eq!(s1.eigenvectors(), s2.eigenvectors());
}

#[test]
fn generic_core_runs_in_single_precision() {
    let mut rng = random::rng(3);
    let h: HermitianObservable<f32> = random::hermitian(&mut rng, 4);
    let psi: QuantumState<f32> = random::state(&mut rng, 4);
    let s = Scenario::with_default_grid(1.0f32, h, psi, vec![]).unwrap();
    let tr = evolve(&s).unwrap();
    let report = quncert::check_conservation(&tr);
    assert!(report.passed, "{report:?}");
}
