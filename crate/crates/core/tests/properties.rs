use proptest::prelude::*;
use qgt_core::linalg::{gauge_fix, max_abs, spectral_decompose};
use qgt_core::mixed::{bures_distance, bures_distance_squared, sjoqvist_distance_squared, thermal_jet};
use qgt_core::pure::{fubini_study_qgt, ground_state_field, qgt_from_state_field};
use qgt_core::states::{gibbs_state, purify, sample, PureState};
use qgt_core::zoo::make_random_model;
use qgt_core::{DifferentiationPlan, ParamPoint, C64};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectral_reconstruction(seed in any::<u64>(), n in 1usize..6) {
        let h = sample::hermitian(&mut rng(seed), n);
        let spec = spectral_decompose(&h).unwrap();
        prop_assert!(spec.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(max_abs(&(spec.reconstruct() - h.matrix())) < 1e-10);
        let v = &spec.eigenvectors;
        let gram = v.adjoint() * v;
        prop_assert!(max_abs(&(gram - qgt_core::CMatrix::identity(n, n))) < 1e-10);
    }

    #[test]
    fn gauge_fix_ignores_input_phase(seed in any::<u64>(), n in 1usize..6, phase in -3.0f64..3.0) {
        let psi = sample::pure_state(&mut rng(seed), n);
        let mut a = psi.amplitudes().clone();
        let mut b = psi.amplitudes() * C64::from_polar(1.0, phase);
        gauge_fix(&mut a);
        gauge_fix(&mut b);
        prop_assert!((a - b).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn distance_hierarchy(seed in any::<u64>(), n in 2usize..5) {
        let mut r = rng(seed);
        let a = sample::density_matrix(&mut r, n);
        let b = sample::density_matrix(&mut r, n);
        let db = bures_distance_squared(&a, &b).unwrap();
        let ds = sjoqvist_distance_squared(&a, &b).unwrap();
        prop_assert!(0.0 <= db && db <= ds + 1e-12 && ds <= 2.0, "{} {}", db, ds);
    }

    #[test]
    fn commuting_pairs_have_equal_distances(seed in any::<u64>(), n in 2usize..5) {
        let (a, b) = sample::commuting_pair(&mut rng(seed), n);
        let db = bures_distance_squared(&a, &b).unwrap().sqrt();
        let ds = sjoqvist_distance_squared(&a, &b).unwrap().sqrt();
        prop_assert!((db - ds).abs() < 1e-10);
    }

    #[test]
    fn pure_pairs_match_overlap(seed in any::<u64>(), n in 2usize..5) {
        let mut r = rng(seed);
        let p1 = sample::pure_state(&mut r, n);
        let p2 = sample::pure_state(&mut r, n);
        let rho = |p: &PureState| qgt_core::states::DensityMatrix::from_pure(p).unwrap();
        let d = bures_distance_squared(&rho(&p1), &rho(&p2)).unwrap();
        prop_assert!((d - (2.0 - 2.0 * p1.inner(&p2).norm())).abs() < 1e-10);
    }

    #[test]
    fn bures_distance_is_unitarily_invariant(seed in any::<u64>(), n in 2usize..5) {
        let mut r = rng(seed);
        let a = sample::density_matrix(&mut r, n);
        let b = sample::density_matrix(&mut r, n);
        let v = sample::unitary(&mut r, n);
        let d = bures_distance(&a, &b).unwrap();
        let moved = bures_distance(&a.conjugated(&v).unwrap(), &b.conjugated(&v).unwrap()).unwrap();
        prop_assert!((d - moved).abs() < 1e-10);
    }

    #[test]
    fn purification_gauge_freedom(seed in any::<u64>(), n in 2usize..5) {
        let mut r = rng(seed);
        let rho = sample::density_matrix(&mut r, n);
        let u = sample::unitary(&mut r, n) * sample::unitary(&mut r, n);
        let w = purify(&rho, &u).unwrap();
        prop_assert!(max_abs(&(w.rho() - rho.matrix())) < 1e-10);
    }

    #[test]
    fn gibbs_weights(seed in any::<u64>(), n in 1usize..6, t in 0.05f64..10.0) {
        let rho = gibbs_state(&sample::hermitian(&mut rng(seed), n), t).unwrap();
        let w = rho.eigenvalues();
        prop_assert!(w.iter().all(|x| *x > 0.0));
        prop_assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn uhlmann_equals_bures(seed in 0u64..10_000, n in 2usize..5, k in 2usize..4, ti in 0usize..3, x in -3.0f64..3.0) {
        let t = [0.2, 1.0, 5.0][ti];
        let m = make_random_model(seed, n, k).unwrap().with_temperature(t).unwrap();
        let r = ParamPoint::from((0..k).map(|i| x + 0.4 * i as f64).collect::<Vec<_>>());
        let jet = thermal_jet(&m, &r, &DifferentiationPlan::default()).unwrap();
        prop_assert!(jet.uhlmann_metric().max_abs_diff(&jet.bures_metric()) < 1e-8);
        prop_assert!(jet.connection_traces().iter().all(|z| z.norm() < 1e-12));
        prop_assert!(jet.bures_metric().is_psd(1e-12));
    }

    #[test]
    fn fubini_study_gauge_invariance(seed in 0u64..10_000, a in -1.0f64..1.0, b in -1.0f64..1.0, x in -3.0f64..3.0) {
        let m = make_random_model(seed, 3, 2).unwrap();
        let r = ParamPoint::from([x, 0.5 * x]);
        let plan = DifferentiationPlan::default();
        let base = fubini_study_qgt(&m, &r, &plan).unwrap();
        let field = ground_state_field(&m, &r).unwrap();
        let dressed = |p: &ParamPoint| {
            let c = p.coords();
            Ok(field(p)? * C64::from_polar(1.0, a * c[0] + b * (c[0] * c[1]).sin()))
        };
        let moved = qgt_from_state_field(dressed, &r, &plan).unwrap();
        prop_assert!(moved.max_abs_diff(&base) < 1e-8);
    }
}
