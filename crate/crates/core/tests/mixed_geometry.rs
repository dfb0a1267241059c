use std::f64::consts::PI;

use nalgebra::DMatrix;
use qgt_core::linalg::{c, unitarity_error};
use qgt_core::mixed::*;
use qgt_core::pure::{fubini_study_metric, ParamLoop};
use qgt_core::states::{bloch_compose, sample, BlochVector, DensityMatrix};
use qgt_core::zoo::{
    make_random_model, paramagnet, paramagnet_bures_closed_form, twoband, twoband_bures_closed_form,
};
use qgt_core::{CMatrix, DifferentiationPlan, Error, HermitianOperator, MetricTensor, ParamPoint, ParameterizedModel, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn plan() -> DifferentiationPlan {
    DifferentiationPlan::default()
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn at_temperature(model: ParameterizedModel, t: f64) -> ParameterizedModel {
    model.with_temperature(t).unwrap()
}

/// Diagonal Hamiltonian in a fixed basis: all states commute.
fn commuting_model(t: f64) -> ParameterizedModel {
    at_temperature(
        ParameterizedModel::from_fn("diag", 2, 3, |r| {
            HermitianOperator::from_real_diagonal(&[r[0].sin(), 1.0 + 0.5 * r[1].cos(), -0.7 + 0.3 * (r[0] + r[1]).sin()])
        }),
        t,
    )
}

fn constant_model(t: f64) -> ParameterizedModel {
    let h = HermitianOperator::pauli_x().add(&HermitianOperator::pauli_z().scale(0.3));
    at_temperature(ParameterizedModel::from_fn("const", 2, 2, move |_| h.clone()), t)
}

fn bloch_field(p: &ParamPoint) -> qgt_core::Result<DensityMatrix> {
    let x = p.coords();
    bloch_compose(&BlochVector::new([x[0], x[1], x[2]])?)
}

#[test]
fn hilbert_schmidt_is_flat_in_bloch_coordinates() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let r = ParamPoint::from([rng.gen_range(-0.2..0.2), rng.gen_range(-0.2..0.2), rng.gen_range(-0.2..0.2)]);
        let g = density_jet(bloch_field, &r, &plan()).unwrap().hilbert_schmidt_metric();
        assert!(g.max_abs_diff(&MetricTensor::diagonal(&[1.0, 1.0, 1.0])) < 1e-10);
    }
}

#[test]
fn hilbert_schmidt_polar_form() {
    // a = (r/2) n(theta, phi)
    let field = |p: &ParamPoint| {
        let (r, t, f) = (p.coords()[0], p.coords()[1], p.coords()[2]);
        bloch_compose(&BlochVector::new([0.5 * r * t.sin() * f.cos(), 0.5 * r * t.sin() * f.sin(), 0.5 * r * t.cos()])?)
    };
    let (r, t) = (0.6, 1.1);
    let g = density_jet(field, &ParamPoint::from([r, t, 0.4]), &plan()).unwrap().hilbert_schmidt_metric();
    let expected = MetricTensor::diagonal(&[0.25, 0.25 * r * r, 0.25 * r * r * t.sin().powi(2)]);
    assert!(g.max_abs_diff(&expected) < 1e-9);
}

#[test]
fn constant_state_has_zero_geometry() {
    let m = constant_model(0.7);
    let r = ParamPoint::from([0.3, 0.2]);
    assert_eq!(hilbert_schmidt_metric(&m, &r, &plan()).unwrap().max_abs(), 0.0);
    assert_eq!(bures_metric(&m, &r, &plan()).unwrap().max_abs(), 0.0);
    assert_eq!(uhlmann_metric(&m, &r, &plan()).unwrap().max_abs(), 0.0);
    assert_eq!(uhlmann_connection(&m, &r, &plan()).unwrap().max_abs(), 0.0);
}

#[test]
fn paramagnet_bures_matches_closed_form() {
    let m0 = paramagnet(1.0);
    for &t in &[0.05, 0.3, 1.0, 4.0] {
        let m = at_temperature(m0.clone(), t);
        for &(theta, phi) in &[(PI / 4.0, 0.0), (1.3, 2.0), (2.6, 4.4)] {
            let g = bures_metric(&m, &ParamPoint::from([theta, phi]), &plan()).unwrap();
            assert!(g.max_abs_diff(&paramagnet_bures_closed_form(theta, t, 1.0)) < 1e-8);
        }
    }
}

#[test]
fn twoband_bures_matches_closed_form_at_figure_point() {
    let k = 1.2 * PI;
    for &t in &[0.05, 0.1, 0.5, 1.0, 3.0] {
        let m = at_temperature(twoband(1.0), t);
        let g = bures_metric(&m, &ParamPoint::from([k, k]), &plan()).unwrap();
        assert!(g.max_abs_diff(&twoband_bures_closed_form(k, k, 1.0, t)) < 1e-8, "T={t}");
    }
    let cold = at_temperature(twoband(1.0), 0.1);
    let g = bures_metric(&cold, &ParamPoint::from([k, k]), &plan()).unwrap();
    assert!(g.get(0, 1) < 0.0);
}

#[test]
fn bloch_bures_examples() {
    // radial variation at r = 0.5
    let radial = |p: &ParamPoint| BlochVector::new([0.0, 0.0, 0.5 * p.coords()[0]]);
    let g = bures_metric_bloch(radial, &ParamPoint::from([0.5]), &plan()).unwrap();
    assert!((g.get(0, 0) - 1.0 / 3.0).abs() < 1e-9);

    let r = 0.7;
    let angular = move |p: &ParamPoint| {
        let t = p.coords()[0];
        BlochVector::new([0.5 * r * t.sin(), 0.0, 0.5 * r * t.cos()])
    };
    let g = bures_metric_bloch(angular, &ParamPoint::from([0.9]), &plan()).unwrap();
    assert!((g.get(0, 0) - 0.25 * r * r).abs() < 1e-9);

    let zero = |_: &ParamPoint| BlochVector::new([0.0, 0.0, 0.0]);
    assert_eq!(bures_metric_bloch(zero, &ParamPoint::from([0.1, 0.2]), &plan()).unwrap().max_abs(), 0.0);

    let pure = |_: &ParamPoint| BlochVector::new([0.0, 0.0, 0.5]);
    assert!(matches!(bures_metric_bloch(pure, &ParamPoint::from([0.0]), &plan()), Err(Error::PurityBoundary(_))));
}

/// Smooth random Bloch field inside the ball: `a(R) = a0 + sum_mu sin(R^mu) b_mu`.
fn random_bloch_field(rng: &mut ChaCha8Rng) -> impl Fn(&ParamPoint) -> qgt_core::Result<BlochVector> {
    let a0: [f64; 3] = [rng.gen_range(-0.15..0.15), rng.gen_range(-0.15..0.15), rng.gen_range(-0.15..0.15)];
    let b: Vec<[f64; 3]> = (0..2)
        .map(|_| [rng.gen_range(-0.1..0.1), rng.gen_range(-0.1..0.1), rng.gen_range(-0.1..0.1)])
        .collect();
    move |p: &ParamPoint| {
        let x = p.coords();
        let v = [0, 1, 2].map(|i| a0[i] + x[0].sin() * b[0][i] + x[1].sin() * b[1][i]);
        BlochVector::new(v)
    }
}

#[test]
fn bloch_and_spectral_bures_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let a = random_bloch_field(&mut rng);
        let r = ParamPoint::from([rng.gen_range(-PI..PI), rng.gen_range(-PI..PI)]);
        let g_bloch = bures_metric_bloch(&a, &r, &plan()).unwrap();
        let rho_field = |p: &ParamPoint| bloch_compose(&a(p)?);
        let jet = density_jet(rho_field, &r, &plan()).unwrap();
        assert!(g_bloch.max_abs_diff(&jet.bures_metric()) < 1e-8);

        // (1/2) Tr(d rho)^2 + (d sqrt(det rho))^2
        let b = |p: &ParamPoint| -> qgt_core::Result<f64> { Ok((0.25 - a(p)?.norm().powi(2)).sqrt()) };
        let db: Vec<f64> = (0..2).map(|mu| qgt_core::fd_derivative(b, &r, mu, &plan()).unwrap()).collect();
        let hs = jet.hilbert_schmidt_metric();
        let a12 = MetricTensor::from_fn(2, |m, n| hs.get(m, n) + db[m] * db[n]);
        assert!(a12.max_abs_diff(&jet.bures_metric()) < 1e-8);
    }
}

#[test]
fn thermal_and_generic_jets_agree() {
    let plan4 = DifferentiationPlan::central4();
    for seed in 0..8 {
        let n = 2 + (seed as usize % 3);
        let m = at_temperature(make_random_model(seed, n, 2).unwrap(), 0.8);
        let r = ParamPoint::from([0.4, -1.3]);
        let thermal = thermal_jet(&m, &r, &plan4).unwrap();
        let generic = density_jet(|p| m.rho(p), &r, &plan4).unwrap();
        assert!(thermal.bures_metric().max_abs_diff(&generic.bures_metric()) < 1e-9);
        assert!(thermal.hilbert_schmidt_metric().max_abs_diff(&generic.hilbert_schmidt_metric()) < 1e-9);
        for mu in 0..2 {
            assert!(max_abs(&(thermal.d_rho_matrix(mu) - generic.d_rho_matrix(mu))) < 1e-9);
            assert!(max_abs(&(thermal.d_sqrt_matrix(mu) - generic.d_sqrt_matrix(mu))) < 1e-9);
            let (a, b) = (thermal.uhlmann_connection(), generic.uhlmann_connection());
            assert!(max_abs(&(&a.components[mu] - &b.components[mu])) < 1e-9);
        }
    }
}

/// Solves `rho A + A rho = -[d sqrt(rho), sqrt(rho)]` as a linear system in
/// `vec(A)`, with `d sqrt(rho)` from differences of the matrix square root.
fn sylvester_connection(m: &ParameterizedModel, r: &ParamPoint, mu: usize) -> CMatrix {
    let rho = m.rho(r).unwrap();
    let n = rho.dim();
    let sq = rho.sqrt().into_matrix();
    let dsq: CMatrix = qgt_core::fd_derivative(
        |p: &ParamPoint| Ok(m.rho(p)?.sqrt().into_matrix()),
        r,
        mu,
        &DifferentiationPlan::central4(),
    )
    .unwrap();
    let rhs = -(&dsq * &sq - &sq * &dsq);
    let id = CMatrix::identity(n, n);
    let op = id.kronecker(rho.matrix()) + rho.matrix().transpose().kronecker(&id);
    let b = CMatrix::from_iterator(n * n, 1, rhs.iter().copied());
    let x = op.lu().solve(&b).unwrap();
    CMatrix::from_iterator(n, n, x.iter().copied())
}

#[test]
fn uhlmann_connection_properties() {
    let m = at_temperature(paramagnet(1.0), 0.6);
    let r = ParamPoint::from([0.9, 2.2]);
    let a = uhlmann_connection(&m, &r, &plan()).unwrap();
    assert!(a.anti_hermiticity_error() < 1e-10);
    let rho = m.rho(&r).unwrap();
    for mu in 0..2 {
        let tr: C64 = (rho.matrix() * &a.components[mu]).trace();
        assert!(tr.norm() < 1e-12);
        let oracle = sylvester_connection(&m, &r, mu);
        assert!(max_abs(&(&a.components[mu] - oracle)) < 1e-8);
    }
    assert!(a.max_abs() > 1e-3);

    let comm = commuting_model(0.5);
    let a = uhlmann_connection(&comm, &ParamPoint::from([0.2, 0.9]), &plan()).unwrap();
    assert_eq!(a.max_abs(), 0.0);
}

#[test]
fn uhlmann_metric_equals_bures() {
    for seed in 0..20 {
        let n = 2 + (seed as usize % 3);
        let k = 2 + (seed as usize % 2);
        let m = at_temperature(make_random_model(seed, n, k).unwrap(), [0.2, 1.0, 5.0][seed as usize % 3]);
        let r = ParamPoint::from((0..k).map(|i| 0.3 * i as f64 - 0.5).collect::<Vec<_>>());
        let jet = thermal_jet(&m, &r, &plan()).unwrap();
        assert!(jet.uhlmann_metric().max_abs_diff(&jet.bures_metric()) < 1e-8);
    }
}

#[test]
fn commuting_family_reduces_to_classical_fisher() {
    let m = commuting_model(0.4);
    let r = ParamPoint::from([0.3, -0.6]);
    let g = uhlmann_metric(&m, &r, &plan()).unwrap();
    let sqrt_weights = |p: &ParamPoint| -> qgt_core::Result<Vec<f64>> {
        let rho = m.rho(p)?;
        let d = rho.matrix().diagonal();
        Ok(d.iter().map(|z| z.re.sqrt()).collect())
    };
    let ds: Vec<Vec<f64>> = (0..2).map(|mu| qgt_core::fd_derivative(sqrt_weights, &r, mu, &plan()).unwrap()).collect();
    let fisher = MetricTensor::from_fn(2, |a, b| ds[a].iter().zip(&ds[b]).map(|(x, y)| x * y).sum());
    assert!(g.max_abs_diff(&fisher) < 1e-9);
}

#[test]
fn uhlmann_form_vanishes() {
    let cases = [
        (at_temperature(paramagnet(1.0), 0.5), ParamPoint::from([1.0, 0.4])),
        (at_temperature(twoband(1.0), 0.3), ParamPoint::from([0.7, -1.9])),
        (at_temperature(make_random_model(2, 3, 3).unwrap(), 1.0), ParamPoint::from([0.1, 0.2, 0.3])),
    ];
    for (m, r) in &cases {
        let s = uhlmann_form(m, r, &plan()).unwrap();
        assert!(s.max_abs() < 1e-8);
    }
    let one = at_temperature(make_random_model(2, 3, 1).unwrap(), 1.0);
    let s = uhlmann_form(&one, &ParamPoint::from([0.4]), &plan()).unwrap();
    assert_eq!(s.dim(), 1);
    assert_eq!(s.get(0, 0), 0.0);
}

fn diag_state(w: &[f64]) -> DensityMatrix {
    DensityMatrix::new(HermitianOperator::from_real_diagonal(w)).unwrap()
}

#[test]
fn fidelity_and_distance_examples() {
    let a = diag_state(&[0.7, 0.3]);
    let b = diag_state(&[0.6, 0.4]);
    assert!((uhlmann_fidelity(&a, &a).unwrap() - 1.0).abs() < 1e-15);
    assert!(bures_distance_squared(&a, &a).unwrap() < 1e-15);
    let f = 0.42_f64.sqrt() + 0.12_f64.sqrt();
    assert!((uhlmann_fidelity(&a, &b).unwrap() - f).abs() < 1e-14);
    let db2 = bures_distance_squared(&a, &b).unwrap();
    assert!((db2 - 0.011_031_537_290_877_136).abs() < 1e-13);
    assert!((db2 - 0.011_031_4).abs() < 2e-7);
    assert!((sjoqvist_distance_squared(&a, &b).unwrap() - (2.0 - 2.0 * f)).abs() < 1e-14);
    assert!(sjoqvist_distance_squared(&a, &a).unwrap() < 1e-15);

    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let p1 = sample::pure_state(&mut rng, 3);
        let p2 = sample::pure_state(&mut rng, 3);
        let d = bures_distance_squared(&DensityMatrix::from_pure(&p1).unwrap(), &DensityMatrix::from_pure(&p2).unwrap())
            .unwrap();
        assert!((d - (2.0 - 2.0 * p1.inner(&p2).norm())).abs() < 1e-10);
    }
}

#[test]
fn bures_distance_symmetry_and_unitary_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..50 {
        let n = rng.gen_range(2..=4);
        let a = sample::density_matrix(&mut rng, n);
        let b = sample::density_matrix(&mut rng, n);
        let d = bures_distance(&a, &b).unwrap();
        assert!((d - bures_distance(&b, &a).unwrap()).abs() < 1e-10);
        let v = sample::unitary(&mut rng, n);
        let moved = bures_distance(&a.conjugated(&v).unwrap(), &b.conjugated(&v).unwrap()).unwrap();
        assert!((d - moved).abs() < 1e-10);
    }
}

#[test]
fn sjoqvist_rejects_degenerate_spectra() {
    let a = DensityMatrix::new(HermitianOperator::identity(2).scale(0.5)).unwrap();
    let b = diag_state(&[0.6, 0.4]);
    assert!(matches!(sjoqvist_distance(&a, &b), Err(Error::Degenerate { .. })));
}

#[test]
fn sjoqvist_dominates_bures_on_random_triples() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..200 {
        let a = sample::density_matrix(&mut rng, 3);
        let b = sample::density_matrix(&mut rng, 3);
        let db = bures_distance_squared(&a, &b).unwrap();
        let ds = sjoqvist_distance_squared(&a, &b).unwrap();
        assert!(0.0 <= db && db <= ds + 1e-14 && ds <= 2.0);
    }
}

fn holonomy_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    max_abs(&(a - b))
}

#[test]
fn holonomy_identity_cases() {
    let loop2 = ParamLoop::ellipse(&ParamPoint::from([0.0, 0.0]), &[0.5, 0.0], &[0.0, 0.5], 32).unwrap();
    let h = uhlmann_holonomy(&constant_model(0.5), &loop2, &plan()).unwrap();
    assert_eq!(holonomy_diff(&h, &CMatrix::identity(2, 2)), 0.0);
    let h = uhlmann_holonomy(&commuting_model(0.5), &loop2, &plan()).unwrap();
    assert_eq!(holonomy_diff(&h, &CMatrix::identity(3, 3)), 0.0);
}

#[test]
fn paramagnet_holonomy_properties() {
    let m = at_temperature(paramagnet(1.0), 0.5);
    let base = ParamPoint::from([1.0, 0.0]);
    let hol = |n| uhlmann_holonomy(&m, &ParamLoop::coordinate_circle(&base, 1, n).unwrap(), &plan()).unwrap();
    let (h1, h2, h4) = (hol(64), hol(128), hol(256));
    assert!(unitarity_error(&h1) < 1e-8);
    assert!(holonomy_diff(&h1, &CMatrix::identity(2, 2)) > 1e-2);
    let factor = holonomy_diff(&h1, &h2) / holonomy_diff(&h2, &h4);
    assert!(factor >= 3.5, "factor {factor}");

    let path = ParamLoop::coordinate_circle(&base, 1, 64).unwrap();
    let back = uhlmann_holonomy(&m, &path.reversed(), &plan()).unwrap();
    assert!(holonomy_diff(&back, &h1.adjoint()) < 1e-8);

    let coarse = ParamLoop::coordinate_circle(&base, 1, 4).unwrap();
    assert!(matches!(uhlmann_holonomy(&m, &coarse, &plan()), Err(Error::UnderResolvedLoop(_))));
}

#[test]
fn mixed_pythagorean_trivial_gauge_commuting() {
    let m = commuting_model(0.5);
    let r = ParamPoint::from([0.4, 0.8]);
    let rep = check_mixed_pythagorean(&m, &r, &GaugeField::trivial(3, r.clone()), &plan()).unwrap();
    assert!(rep.fiber.max_abs() < 1e-12);
    assert!(rep.residual < 1e-6);
}

#[test]
fn mixed_pythagorean_parallel_transport() {
    let m = at_temperature(paramagnet(1.0), 0.7);
    let r = ParamPoint::from([1.2, 0.5]);
    let gauge = GaugeField::parallel_transport(&m, &r, &plan()).unwrap();
    let rep = check_mixed_pythagorean(&m, &r, &gauge, &plan()).unwrap();
    assert!(rep.fiber.max_abs() < 1e-6);
    assert!(rep.raw.max_abs_diff(&rep.base) < 1e-6);
}

#[test]
fn mixed_pythagorean_random_gauges() {
    let m = at_temperature(paramagnet(1.0), 0.7);
    let r = ParamPoint::from([1.2, 0.5]);
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..5 {
        let gauge = GaugeField::random(&mut rng, 2, r.clone());
        let rep = check_mixed_pythagorean(&m, &r, &gauge, &plan()).unwrap();
        assert!(rep.residual < 1e-6, "{}", rep.residual);
        assert!(rep.fiber.max_abs() > 1e-3);
        let broken = mixed_pythagorean_with_sign(&m, &r, &gauge, &plan(), -1.0).unwrap();
        assert!(broken.residual > 1e-4);
    }
}

#[test]
fn zero_temperature_sweep_paramagnet() {
    let m = paramagnet(1.0);
    let theta = PI / 4.0;
    let r = ParamPoint::from([theta, 0.3]);
    let betas: Vec<f64> = (0..30).map(|i| 0.5 * 1.25_f64.powi(i)).collect();
    let (fs, rows) = zero_temperature_sweep(&m, &r, &betas, &DifferentiationPlan::central4()).unwrap();
    assert!(fs.max_abs_diff(&MetricTensor::diagonal(&[0.25, 0.125])) < 1e-10);
    let last = rows.last().unwrap();
    assert!((last.bures.get(0, 0) - 0.25).abs() < 1e-8);
    assert!((last.bures.get(1, 1) - 0.125).abs() < 1e-8);

    let hot = at_temperature(m, 100.0);
    let g = bures_metric(&hot, &r, &plan()).unwrap();
    assert!(g.get(0, 0) < 1e-5);
    assert!((g.get(0, 0) - 0.25 * 0.005_f64.tanh().powi(2)).abs() < 1e-12);
}

#[test]
fn bures_distance_matches_metric() {
    let m = at_temperature(twoband(1.0), 0.4);
    let r = ParamPoint::from([0.6, -0.9]);
    let g = bures_metric(&m, &r, &plan()).unwrap();
    let rho = m.rho(&r).unwrap();
    let delta = [0.8, 0.6];
    for &h in &[1e-2, 1e-3] {
        let moved = m.rho(&r.displaced(&delta, h)).unwrap();
        let ratio = bures_distance_squared(&rho, &moved).unwrap() / (h * h * g.quadratic_form(&delta));
        assert!((ratio - 1.0).abs() <= 10.0 * h, "h={h}: {ratio}");
    }
}

#[test]
fn fs_limit_of_twoband_is_quarter_printed_form() {
    let m = twoband(1.0);
    let r = ParamPoint::from([0.7, -1.1]);
    let fs = fubini_study_metric(&m, &r, &plan()).unwrap();
    let printed = qgt_core::zoo::twoband_fs_closed_form(0.7, -1.1, 1.0);
    assert!(fs.max_abs_diff(&printed.scale(0.25)) < 1e-8);
    assert!(fs.max_abs_diff(&printed) > 1e-2);
}

#[test]
fn gauge_field_is_unitary() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let g = GaugeField::random(&mut rng, 3, ParamPoint::from([0.0, 0.0]));
    let u = g.unitary(&ParamPoint::from([0.7, -2.0])).unwrap();
    assert!(unitarity_error(&u) < 1e-10);
    let bad = DMatrix::from_element(2, 2, c(1.0, 0.0));
    assert!(GaugeField::new(vec![bad], ParamPoint::from([0.0])).is_err());
}
