//! Built-in parameterized Hamiltonians and their closed-form metrics.
//!
//! Temperatures are in units of the model's energy scale: `omega0` for the
//! paramagnet, `mu` for the two-band model.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{spectral_decompose, HermitianOperator, ParamPoint};
use crate::states::{gibbs_state, sample, DensityMatrix};
use crate::tensor::MetricTensor;

/// A map `R -> H(R)` of fixed matrix dimension.
pub trait Hamiltonian: Send + Sync {
    fn dim(&self) -> usize;
    fn eval(&self, r: &[f64]) -> HermitianOperator;
}

/// One coordinate interval of the domain box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    /// Periodic coordinates accept any value.
    pub periodic: bool,
}

impl Interval {
    pub fn closed(lo: f64, hi: f64) -> Self {
        Interval { lo, hi, periodic: false }
    }

    pub fn periodic(lo: f64, hi: f64) -> Self {
        Interval { lo, hi, periodic: true }
    }

    pub fn extent(&self) -> f64 {
        self.hi - self.lo
    }
}

#[derive(Clone)]
pub struct ParameterizedModel {
    pub name: String,
    pub param_names: Vec<String>,
    pub domain: Vec<Interval>,
    pub hamiltonian: Arc<dyn Hamiltonian>,
    pub temperature: Option<f64>,
}

impl fmt::Debug for ParameterizedModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParameterizedModel")
            .field("name", &self.name)
            .field("param_names", &self.param_names)
            .field("domain", &self.domain)
            .field("dim", &self.hamiltonian.dim())
            .field("temperature", &self.temperature)
            .finish()
    }
}

impl ParameterizedModel {
    pub fn new(
        name: impl Into<String>,
        param_names: Vec<String>,
        domain: Vec<Interval>,
        hamiltonian: Arc<dyn Hamiltonian>,
    ) -> Self {
        ParameterizedModel {
            name: name.into(),
            param_names,
            domain,
            hamiltonian,
            temperature: None,
        }
    }

    /// Builds a model from a closure. The domain is unbounded.
    pub fn from_fn<F>(name: &str, k: usize, dim: usize, f: F) -> Self
    where
        F: Fn(&[f64]) -> HermitianOperator + Send + Sync + 'static,
    {
        struct FnHamiltonian<F> {
            dim: usize,
            f: F,
        }
        impl<F: Fn(&[f64]) -> HermitianOperator + Send + Sync> Hamiltonian for FnHamiltonian<F> {
            fn dim(&self) -> usize {
                self.dim
            }
            fn eval(&self, r: &[f64]) -> HermitianOperator {
                (self.f)(r)
            }
        }
        ParameterizedModel::new(
            name,
            (0..k).map(|i| format!("x{i}")).collect(),
            vec![Interval::periodic(f64::NEG_INFINITY, f64::INFINITY); k],
            Arc::new(FnHamiltonian { dim, f }),
        )
    }

    pub fn with_temperature(mut self, temperature: f64) -> Result<Self> {
        if !(temperature.is_finite() && temperature > 0.0) {
            return Err(Error::InvalidTemperature(temperature));
        }
        self.temperature = Some(temperature);
        Ok(self)
    }

    pub fn without_temperature(mut self) -> Self {
        self.temperature = None;
        self
    }

    /// Number of parameters k.
    pub fn k(&self) -> usize {
        self.param_names.len()
    }

    /// Hilbert-space dimension N.
    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    pub fn extents(&self) -> Vec<f64> {
        self.domain.iter().map(Interval::extent).collect()
    }

    pub fn check_point(&self, r: &ParamPoint) -> Result<()> {
        if r.dim() != self.k() {
            return Err(Error::DimensionMismatch {
                expected: self.k(),
                got: r.dim(),
            });
        }
        for (i, (&x, iv)) in r.coords().iter().zip(&self.domain).enumerate() {
            if !x.is_finite() {
                return Err(Error::InvalidPoint(format!("coordinate {i} is {x}")));
            }
            if !iv.periodic && (x < iv.lo || x > iv.hi) {
                return Err(Error::OutsideDomain {
                    coordinate: i,
                    value: x,
                    lo: iv.lo,
                    hi: iv.hi,
                });
            }
        }
        Ok(())
    }

    pub fn hamiltonian_at(&self, r: &ParamPoint) -> Result<HermitianOperator> {
        self.check_point(r)?;
        Ok(self.hamiltonian.eval(r.coords()))
    }

    pub fn require_temperature(&self) -> Result<f64> {
        self.temperature.ok_or(Error::MissingTemperature)
    }

    /// Gibbs state of `H(R)` at the model temperature.
    pub fn rho(&self, r: &ParamPoint) -> Result<DensityMatrix> {
        let t = self.require_temperature()?;
        gibbs_state(&self.hamiltonian_at(r)?, t)
    }
}

/// `H = (omega0/2) B . sigma` with `B = (sin t cos p, sin t sin p, cos t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Paramagnet {
    pub omega0: f64,
}

impl Hamiltonian for Paramagnet {
    fn dim(&self) -> usize {
        2
    }

    fn eval(&self, r: &[f64]) -> HermitianOperator {
        let (theta, phi) = (r[0], r[1]);
        let n = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
        pauli_combination(n, 0.5 * self.omega0)
    }
}

/// `H_k = sin kx sigma_x + sin ky sigma_y + mu sigma_z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoBand {
    pub mu: f64,
}

impl TwoBand {
    /// Gap `2 sqrt(sin^2 kx + sin^2 ky + mu^2)`.
    pub fn gap(&self, kx: f64, ky: f64) -> f64 {
        2.0 * (kx.sin().powi(2) + ky.sin().powi(2) + self.mu * self.mu).sqrt()
    }
}

impl Hamiltonian for TwoBand {
    fn dim(&self) -> usize {
        2
    }

    fn eval(&self, r: &[f64]) -> HermitianOperator {
        pauli_combination([r[0].sin(), r[1].sin(), self.mu], 1.0)
    }
}

/// `H(R) = H0 + sum_mu sin(R^mu) H_mu` with fixed random Hermitian terms.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomField {
    pub h0: HermitianOperator,
    pub terms: Vec<HermitianOperator>,
}

impl Hamiltonian for RandomField {
    fn dim(&self) -> usize {
        self.h0.dim()
    }

    fn eval(&self, r: &[f64]) -> HermitianOperator {
        let mut m = self.h0.matrix().clone();
        for (x, h) in r.iter().zip(&self.terms) {
            m += h.matrix() * crate::linalg::c(x.sin(), 0.0);
        }
        HermitianOperator::symmetrized(m)
    }
}

fn pauli_combination(n: [f64; 3], scale: f64) -> HermitianOperator {
    let p = HermitianOperator::paulis();
    p[0].scale(scale * n[0])
        .add(&p[1].scale(scale * n[1]))
        .add(&p[2].scale(scale * n[2]))
}

pub fn paramagnet(omega0: f64) -> ParameterizedModel {
    ParameterizedModel::new(
        "paramagnet",
        vec!["theta".into(), "phi".into()],
        vec![Interval::closed(0.0, PI), Interval::periodic(0.0, 2.0 * PI)],
        Arc::new(Paramagnet { omega0 }),
    )
}

pub fn twoband(mu: f64) -> ParameterizedModel {
    ParameterizedModel::new(
        "twoband",
        vec!["kx".into(), "ky".into()],
        vec![Interval::periodic(-PI, PI), Interval::periodic(-PI, PI)],
        Arc::new(TwoBand { mu }),
    )
}

/// Minimum level spacing accepted at the origin of a random draw.
pub const RANDOM_MIN_GAP: f64 = 1e-6;

/// Seeded random field on `k` periodic parameters. Draws whose spectrum at the
/// origin has a gap below [`RANDOM_MIN_GAP`] are resampled from the same
/// stream.
pub fn make_random_model(seed: u64, n: usize, k: usize) -> Result<ParameterizedModel> {
    if n < 2 {
        return Err(Error::config("n", format!("random model needs N >= 2, got {n}")));
    }
    if k < 1 {
        return Err(Error::config("k", format!("random model needs k >= 1, got {k}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = loop {
        let h0 = sample::hermitian(&mut rng, n);
        let terms: Vec<_> = (0..k).map(|_| sample::hermitian(&mut rng, n)).collect();
        let field = RandomField { h0, terms };
        let spec = spectral_decompose(&field.eval(&vec![0.0; k]))?;
        if spec.min_gap() >= RANDOM_MIN_GAP {
            break field;
        }
    };
    Ok(ParameterizedModel::new(
        format!("random(seed={seed},N={n},k={k})"),
        (0..k).map(|i| format!("r{i}")).collect(),
        vec![Interval::periodic(-PI, PI); k],
        Arc::new(field),
    ))
}

/// Model selection by name, as used by configuration files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub name: String,
    #[serde(default = "one")]
    pub omega0: f64,
    #[serde(default = "one")]
    pub mu: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "two")]
    pub n: usize,
    #[serde(default = "two")]
    pub k: usize,
    #[serde(default)]
    pub temperature: Option<f64>,
}

fn one() -> f64 {
    1.0
}

fn two() -> usize {
    2
}

impl ModelSpec {
    pub fn named(name: &str) -> Self {
        ModelSpec {
            name: name.to_string(),
            omega0: 1.0,
            mu: 1.0,
            seed: 0,
            n: 2,
            k: 2,
            temperature: None,
        }
    }

    pub fn build(&self) -> Result<ParameterizedModel> {
        let model = match self.name.as_str() {
            "paramagnet" => {
                positive("model.omega0", self.omega0)?;
                paramagnet(self.omega0)
            }
            "twoband" => {
                positive("model.mu", self.mu)?;
                twoband(self.mu)
            }
            "random" => make_random_model(self.seed, self.n, self.k)
                .map_err(|e| Error::config("model", e.to_string()))?,
            other => {
                return Err(Error::config(
                    "model.name",
                    format!("unknown model `{other}` (expected paramagnet, twoband or random)"),
                ))
            }
        };
        match self.temperature {
            Some(t) => model
                .with_temperature(t)
                .map_err(|e| Error::config("model.temperature", e.to_string())),
            None => Ok(model),
        }
    }
}

fn positive(field: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::config(field, format!("must be positive, got {x}")))
    }
}

/// `diag(tanh^2(b w/2)/4, tanh^2(b w/2) sin^2(theta)/4)` over `(theta, phi)`.
pub fn paramagnet_bures_closed_form(theta: f64, temperature: f64, omega0: f64) -> MetricTensor {
    let t2 = (omega0 / (2.0 * temperature)).tanh().powi(2);
    MetricTensor::diagonal(&[0.25 * t2, 0.25 * t2 * theta.sin().powi(2)])
}

/// `diag(1/4, sin^2(theta)/4)`.
pub fn paramagnet_fs_closed_form(theta: f64) -> MetricTensor {
    MetricTensor::diagonal(&[0.25, 0.25 * theta.sin().powi(2)])
}

/// Bures metric of the two-band Gibbs state over `(kx, ky)`.
pub fn twoband_bures_closed_form(kx: f64, ky: f64, mu: f64, temperature: f64) -> MetricTensor {
    let beta = 1.0 / temperature;
    let gap = TwoBand { mu }.gap(kx, ky);
    let x = 0.5 * beta * gap;
    let d2 = gap * gap;
    let tanh2 = x.tanh().powi(2);
    let cosh = x.cosh();
    let bracket = beta * beta / (4.0 * cosh * cosh) - tanh2 / d2;
    let (sx, cx, sy, cy) = (kx.sin(), kx.cos(), ky.sin(), ky.cos());
    let xx = bracket * 4.0 * sx * sx * cx * cx / d2 + tanh2 / d2 * cx * cx;
    let yy = bracket * 4.0 * sy * sy * cy * cy / d2 + tanh2 / d2 * cy * cy;
    let xy = bracket * 4.0 * sx * cx * sy * cy / d2;
    MetricTensor::from_fn(2, |i, j| match (i, j) {
        (0, 0) => xx,
        (1, 1) => yy,
        _ => xy,
    })
}

/// Two-band "Fubini-Study" components in the widely quoted closed form
/// `cos^2 kx (sin^2 ky + mu^2) / s^2`, `cos^2 ky (sin^2 kx + mu^2) / s^2`,
/// `-sin 2kx sin 2ky / (4 s^2)` with `s = sin^2 kx + sin^2 ky + mu^2`.
///
/// These equal `d n . d n` for the unit vector `n = (sin kx, sin ky, mu)/sqrt(s)`,
/// which is four times the ground-state metric `Re g` computed by
/// [`crate::pure::fubini_study_metric`] and four times the zero-temperature
/// limit of [`twoband_bures_closed_form`]. Use [`twoband_fs_metric`] for the
/// ground-state normalization.
pub fn twoband_fs_closed_form(kx: f64, ky: f64, mu: f64) -> MetricTensor {
    let s = kx.sin().powi(2) + ky.sin().powi(2) + mu * mu;
    let s2 = s * s;
    let xx = kx.cos().powi(2) * (ky.sin().powi(2) + mu * mu) / s2;
    let yy = ky.cos().powi(2) * (kx.sin().powi(2) + mu * mu) / s2;
    let xy = -0.25 * (2.0 * kx).sin() * (2.0 * ky).sin() / s2;
    MetricTensor::from_fn(2, |i, j| match (i, j) {
        (0, 0) => xx,
        (1, 1) => yy,
        _ => xy,
    })
}

/// Ground-state Fubini-Study metric of the two-band model:
/// a quarter of [`twoband_fs_closed_form`].
pub fn twoband_fs_metric(kx: f64, ky: f64, mu: f64) -> MetricTensor {
    twoband_fs_closed_form(kx, ky, mu).scale(0.25)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paramagnet_closed_form_values() {
        let g = paramagnet_bures_closed_form(PI / 4.0, 0.5, 1.0);
        assert!((g.get(0, 0) - 0.145_006_414_596_493_47).abs() < 1e-15);
        assert!((g.get(1, 1) - 0.072_503_207_298_246_73).abs() < 1e-15);
        assert_eq!(g.get(0, 1), 0.0);
        let cold = paramagnet_bures_closed_form(PI / 4.0, 1e-4, 1.0);
        assert!(cold.max_abs_diff(&paramagnet_fs_closed_form(PI / 4.0)) < 1e-15);
        let hot = paramagnet_bures_closed_form(PI / 4.0, 1e9, 1.0);
        assert!(hot.max_abs() < 1e-18);
    }

    #[test]
    fn twoband_fs_at_origin() {
        let g = twoband_fs_closed_form(0.0, 0.0, 1.0);
        assert_eq!(g.components(), vec![1.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn twoband_bures_off_diagonal_vanishes_on_axis() {
        for &ky in &[-2.0, 0.3, 1.7] {
            for &t in &[0.1, 1.0, 5.0] {
                assert!(twoband_bures_closed_form(0.0, ky, 1.0, t).get(0, 1).abs() < 1e-18);
            }
        }
    }

    #[test]
    fn twoband_bures_tends_to_ground_state_metric() {
        for &(kx, ky) in &[(0.7, -1.1), (1.2 * PI, 1.2 * PI), (2.0, 0.4)] {
            let cold = twoband_bures_closed_form(kx, ky, 1.0, 1e-3);
            assert!(cold.max_abs_diff(&twoband_fs_metric(kx, ky, 1.0)) < 1e-12);
        }
    }

    #[test]
    fn twoband_symmetries() {
        let (kx, ky, mu) = (0.37, -1.9, 0.8);
        for &t in &[0.1, 1.0] {
            let g = twoband_bures_closed_form(kx, ky, mu, t);
            let swap = twoband_bures_closed_form(ky, kx, mu, t);
            let rot = twoband_bures_closed_form(-ky, kx, mu, t);
            assert!((g.get(0, 0) - swap.get(1, 1)).abs() < 1e-15);
            assert!((g.get(0, 0) - rot.get(1, 1)).abs() < 1e-15);
            assert!((g.get(0, 1) - swap.get(0, 1)).abs() < 1e-15);
            assert!((g.get(0, 1) + rot.get(0, 1)).abs() < 1e-15);
        }
    }

    #[test]
    fn random_model_is_deterministic() {
        let a = make_random_model(42, 3, 2).unwrap();
        let b = make_random_model(42, 3, 2).unwrap();
        let r = [0.3, -1.2];
        assert_eq!(a.hamiltonian.eval(&r), b.hamiltonian.eval(&r));
        let c = make_random_model(43, 3, 2).unwrap();
        assert_ne!(a.hamiltonian.eval(&r), c.hamiltonian.eval(&r));
    }

    #[test]
    fn random_model_probe_grid_full_rank() {
        let m = make_random_model(5, 2, 2).unwrap().with_temperature(1.0).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                let r = ParamPoint::from([-PI + 2.0 * PI * i as f64 / 5.0, -PI + 2.0 * PI * j as f64 / 5.0]);
                assert!(m.rho(&r).unwrap().full_rank());
            }
        }
        let one = make_random_model(5, 3, 1).unwrap();
        assert_eq!(one.k(), 1);
    }

    #[test]
    fn domain_checks() {
        let m = paramagnet(1.0);
        assert!(matches!(
            m.hamiltonian_at(&ParamPoint::from([-0.1, 0.0])),
            Err(Error::OutsideDomain { coordinate: 0, .. })
        ));
        assert!(m.hamiltonian_at(&ParamPoint::from([0.1, 9.0])).is_ok());
        assert!(matches!(m.rho(&ParamPoint::from([0.1, 0.0])), Err(Error::MissingTemperature)));
        assert!(ModelSpec::named("nope").build().is_err());
    }
}
