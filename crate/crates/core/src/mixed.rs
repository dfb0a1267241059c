//! Geometry of full-rank density matrices: Hilbert-Schmidt, Bures and
//! Uhlmann metrics, the Uhlmann connection, holonomy and form, fidelity based
//! distances, and the purification-space decomposition.
//!
//! Everything local is built from a [`DensityJet`]: the spectrum of `rho(R)`
//! together with the eigenbasis matrix elements
//!
//! - `D_ij = <i|d rho|j>`,
//! - `S_ij = <i|d sqrt(rho)|j> = D_ij / (sqrt(l_i) + sqrt(l_j))`,
//! - `A_ij = (sqrt(l_i) - sqrt(l_j)) / (l_i + l_j) S_ij`, the Uhlmann connection.
//!
//! For Gibbs states the jet is assembled from `dH` in the eigenbasis of `H`
//! using divided differences of `e^{-beta E}`, which never divides by a small
//! weight and remains accurate deep in the low-temperature regime.

use nalgebra::{DMatrix, SVD};
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{
    c, expm_anti_hermitian, fd_derivative, max_abs, spectral_decompose, trace_product,
    unitarity_error, CMatrix, DifferentiationPlan, ParamPoint, C64,
};
use crate::pure::{fubini_study_metric, pythagorean_report, ParamLoop, PythagoreanReport};
use crate::states::{gibbs_weights, sample, BlochVector, DensityMatrix};
use crate::tensor::{MetricTensor, TwoForm};
use crate::zoo::ParameterizedModel;

/// Uhlmann connection components `A_mu`, each anti-Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionOneForm {
    pub components: Vec<CMatrix>,
}

impl ConnectionOneForm {
    pub fn k(&self) -> usize {
        self.components.len()
    }

    /// `sum_mu A_mu delta^mu`.
    pub fn contract(&self, delta: &[f64]) -> CMatrix {
        let n = self.components[0].nrows();
        let mut acc = CMatrix::zeros(n, n);
        for (a, &d) in self.components.iter().zip(delta) {
            acc += a * c(d, 0.0);
        }
        acc
    }

    /// `max_mu |A_mu^dag + A_mu|_max`.
    pub fn anti_hermiticity_error(&self) -> f64 {
        self.components
            .iter()
            .map(|a| max_abs(&(a + a.adjoint())))
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.components.iter().map(max_abs).fold(0.0, f64::max)
    }
}

/// Local first-order data of a density-matrix field at one point.
#[derive(Debug, Clone)]
pub struct DensityJet {
    /// Eigenvalues of `rho`, in the column order of `basis`.
    pub weights: Vec<f64>,
    /// Orthonormal eigenvectors of `rho` as columns.
    pub basis: CMatrix,
    /// `<i|d_mu rho|j>` per parameter.
    pub d_rho: Vec<CMatrix>,
    /// `<i|d_mu sqrt(rho)|j>` per parameter.
    pub d_sqrt: Vec<CMatrix>,
    /// Uhlmann connection `<i|A_mu|j>` per parameter.
    pub connection: Vec<CMatrix>,
    /// `(sqrt(l_i) + sqrt(l_j))^2 / (l_i + l_j)`.
    pub bures_weights: DMatrix<f64>,
}

impl DensityJet {
    pub fn k(&self) -> usize {
        self.d_rho.len()
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    fn to_original(&self, m: &CMatrix) -> CMatrix {
        &self.basis * m * self.basis.adjoint()
    }

    pub fn rho(&self) -> CMatrix {
        let mut scaled = self.basis.clone();
        for (j, &w) in self.weights.iter().enumerate() {
            scaled.column_mut(j).scale_mut(w);
        }
        scaled * self.basis.adjoint()
    }

    /// `d_mu rho` in the original basis.
    pub fn d_rho_matrix(&self, mu: usize) -> CMatrix {
        self.to_original(&self.d_rho[mu])
    }

    /// `d_mu sqrt(rho)` in the original basis.
    pub fn d_sqrt_matrix(&self, mu: usize) -> CMatrix {
        self.to_original(&self.d_sqrt[mu])
    }

    /// `g_mu nu = Tr(d rho d rho) / 2`.
    pub fn hilbert_schmidt_metric(&self) -> MetricTensor {
        MetricTensor::from_fn(self.k(), |a, b| 0.5 * trace_product(&self.d_rho[a], &self.d_rho[b]).re)
    }

    /// `g_mu nu = (1/2) sum_ij c_ij S_ij S_ji`, equal to
    /// `(1/2) sum_ij D_ij D_ji / (l_i + l_j)`.
    pub fn bures_metric(&self) -> MetricTensor {
        let n = self.dim();
        MetricTensor::from_fn(self.k(), |a, b| {
            let (sa, sb) = (&self.d_sqrt[a], &self.d_sqrt[b]);
            let mut acc = 0.0;
            for i in 0..n {
                for j in 0..n {
                    acc += self.bures_weights[(i, j)] * (sa[(i, j)] * sb[(j, i)]).re;
                }
            }
            0.5 * acc
        })
    }

    /// Connection in the original basis.
    pub fn uhlmann_connection(&self) -> ConnectionOneForm {
        ConnectionOneForm {
            components: self.connection.iter().map(|a| self.to_original(a)).collect(),
        }
    }

    /// `Tr(d sqrt(rho) d sqrt(rho)) + Tr(rho {A_mu, A_nu}) / 2`, evaluated with
    /// original-basis matrix products.
    pub fn uhlmann_metric(&self) -> MetricTensor {
        let rho = self.rho();
        let ds: Vec<CMatrix> = (0..self.k()).map(|mu| self.d_sqrt_matrix(mu)).collect();
        let a = self.uhlmann_connection().components;
        MetricTensor::from_fn(self.k(), |m, n| {
            let anti = &a[m] * &a[n] + &a[n] * &a[m];
            (trace_product(&ds[m], &ds[n]) + trace_product(&rho, &anti) * 0.5).re
        })
    }

    /// `Tr(rho A_mu)` for each parameter, from original-basis products.
    pub fn connection_traces(&self) -> Vec<C64> {
        let rho = self.rho();
        self.uhlmann_connection().components.iter().map(|a| trace_product(&rho, a)).collect()
    }
}

fn require_positive(weights: &[f64], tolerance: f64) -> Result<()> {
    let min = weights.iter().copied().fold(f64::INFINITY, f64::min);
    if min > tolerance {
        Ok(())
    } else {
        Err(Error::RankDeficient {
            min_eigenvalue: min,
            tolerance,
        })
    }
}

fn bures_weights(weights: &[f64]) -> DMatrix<f64> {
    let n = weights.len();
    DMatrix::from_fn(n, n, |i, j| {
        let (a, b) = (weights[i], weights[j]);
        let s = a.sqrt() + b.sqrt();
        s * s / (a + b)
    })
}

/// Jet of an arbitrary density-matrix field from central differences of
/// `rho` itself.
pub fn density_jet<F>(field: F, r: &ParamPoint, plan: &DifferentiationPlan) -> Result<DensityJet>
where
    F: Fn(&ParamPoint) -> Result<DensityMatrix>,
{
    let rho = field(r)?;
    rho.require_full_rank()?;
    let spec = rho.spectrum();
    let v = &spec.eigenvectors;
    let lam = spec.eigenvalues.clone();
    let n = lam.len();
    let sq: Vec<f64> = lam.iter().map(|x| x.sqrt()).collect();
    let mut d_rho = Vec::with_capacity(r.dim());
    let mut d_sqrt = Vec::with_capacity(r.dim());
    let mut connection = Vec::with_capacity(r.dim());
    for mu in 0..r.dim() {
        let d: CMatrix = fd_derivative(|p: &ParamPoint| Ok(field(p)?.matrix().clone()), r, mu, plan)?;
        let d = v.adjoint() * d * v;
        let s = CMatrix::from_fn(n, n, |i, j| d[(i, j)] / (sq[i] + sq[j]));
        let a = CMatrix::from_fn(n, n, |i, j| s[(i, j)] * ((sq[i] - sq[j]) / (lam[i] + lam[j])));
        d_rho.push(d);
        d_sqrt.push(s);
        connection.push(a);
    }
    Ok(DensityJet {
        bures_weights: bures_weights(&lam),
        weights: lam,
        basis: v.clone(),
        d_rho,
        d_sqrt,
        connection,
    })
}

/// `1 - sech(x)`, accurate for small and large `|x|`.
fn one_minus_sech(x: f64) -> f64 {
    let ax = x.abs();
    if ax > 40.0 {
        1.0 - 2.0 * (-ax).exp()
    } else {
        2.0 * (0.5 * ax).sinh().powi(2) / ax.cosh()
    }
}

fn sech(x: f64) -> f64 {
    let ax = x.abs();
    if ax > 700.0 {
        0.0
    } else {
        1.0 / ax.cosh()
    }
}

/// Jet of the Gibbs field `e^{-beta H(R)} / Z` from central differences of
/// `H`, in the eigenbasis of `H` (ascending energies).
pub fn thermal_jet(model: &ParameterizedModel, r: &ParamPoint, plan: &DifferentiationPlan) -> Result<DensityJet> {
    plan.validate_for_extents(&model.extents())?;
    let beta = 1.0 / model.require_temperature()?;
    let spec = spectral_decompose(&model.hamiltonian_at(r)?)?;
    let e = &spec.eigenvalues;
    let v = &spec.eigenvectors;
    let n = e.len();
    let lam = gibbs_weights(e, beta);
    require_positive(&lam, 0.0)?;
    let sq: Vec<f64> = lam.iter().map(|x| x.sqrt()).collect();

    let mut d_rho = Vec::with_capacity(r.dim());
    let mut d_sqrt = Vec::with_capacity(r.dim());
    let mut connection = Vec::with_capacity(r.dim());
    for mu in 0..r.dim() {
        let dh: CMatrix = fd_derivative(
            |p: &ParamPoint| Ok(model.hamiltonian_at(p)?.into_matrix()),
            r,
            mu,
            plan,
        )?;
        let hd = v.adjoint() * dh * v;
        let mean: f64 = (0..n).map(|k| lam[k] * hd[(k, k)].re).sum();
        let mut d = CMatrix::zeros(n, n);
        let mut s = CMatrix::zeros(n, n);
        let mut a = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                // divided differences of exp(-beta E) and exp(-beta E / 2),
                // expressed through the weight of the lower level
                let (lo, gap) = if e[i] <= e[j] { (i, e[j] - e[i]) } else { (j, e[i] - e[j]) };
                let (dd_rho, dd_sqrt) = if gap > 0.0 {
                    (
                        lam[lo] * (-beta * gap).exp_m1() / gap,
                        sq[lo] * (-0.5 * beta * gap).exp_m1() / gap,
                    )
                } else {
                    (-beta * lam[lo], -0.5 * beta * sq[lo])
                };
                d[(i, j)] = hd[(i, j)] * dd_rho;
                s[(i, j)] = hd[(i, j)] * dd_sqrt;
                if i != j {
                    let delta = e[i] - e[j];
                    if delta != 0.0 {
                        a[(i, j)] = hd[(i, j)] * (one_minus_sech(0.5 * beta * delta) / delta);
                    }
                }
            }
            d[(i, i)] += c(beta * lam[i] * mean, 0.0);
            s[(i, i)] += c(0.5 * beta * sq[i] * mean, 0.0);
        }
        d_rho.push(d);
        d_sqrt.push(s);
        connection.push(a);
    }
    let bures_weights = DMatrix::from_fn(n, n, |i, j| 1.0 + sech(0.5 * beta * (e[i] - e[j])));
    Ok(DensityJet {
        weights: lam,
        basis: v.clone(),
        d_rho,
        d_sqrt,
        connection,
        bures_weights,
    })
}

pub fn hilbert_schmidt_metric(
    model: &ParameterizedModel,
    r: &ParamPoint,
    plan: &DifferentiationPlan,
) -> Result<MetricTensor> {
    Ok(thermal_jet(model, r, plan)?.hilbert_schmidt_metric())
}

pub fn bures_metric(model: &ParameterizedModel, r: &ParamPoint, plan: &DifferentiationPlan) -> Result<MetricTensor> {
    Ok(thermal_jet(model, r, plan)?.bures_metric())
}

pub fn uhlmann_connection(
    model: &ParameterizedModel,
    r: &ParamPoint,
    plan: &DifferentiationPlan,
) -> Result<ConnectionOneForm> {
    Ok(thermal_jet(model, r, plan)?.uhlmann_connection())
}

pub fn uhlmann_metric(model: &ParameterizedModel, r: &ParamPoint, plan: &DifferentiationPlan) -> Result<MetricTensor> {
    Ok(thermal_jet(model, r, plan)?.uhlmann_metric())
}

/// `sigma_mu nu = (i/2)[d_mu Tr(rho A_nu) - d_nu Tr(rho A_mu)]`, by central
/// differences of the scalar fields `Tr(rho A_mu)`.
pub fn uhlmann_form(model: &ParameterizedModel, r: &ParamPoint, plan: &DifferentiationPlan) -> Result<TwoForm> {
    let k = r.dim();
    let traces = |p: &ParamPoint| -> Result<CMatrix> {
        let t = thermal_jet(model, p, plan)?.connection_traces();
        Ok(CMatrix::from_iterator(k, 1, t))
    };
    let grads: Vec<CMatrix> = (0..k).map(|mu| fd_derivative(traces, r, mu, plan)).collect::<Result<_>>()?;
    let half_i = c(0.0, 0.5);
    Ok(TwoForm::new(DMatrix::from_fn(k, k, |m, n| {
        (half_i * (grads[m][(n, 0)] - grads[n][(m, 0)])).re
    })))
}

/// Bures metric of a qubit from its Bloch-vector field:
/// `da . da + (a . da)^2 / (1/4 - a^2)`.
pub fn bures_metric_bloch<F>(a_field: F, r: &ParamPoint, plan: &DifferentiationPlan) -> Result<MetricTensor>
where
    F: Fn(&ParamPoint) -> Result<BlochVector>,
{
    let checked = |p: &ParamPoint| -> Result<Vec<f64>> {
        let a = a_field(p)?;
        if !(a.norm() < 0.5) {
            return Err(Error::PurityBoundary(a.norm()));
        }
        Ok(a.components().to_vec())
    };
    let a = checked(r)?;
    let da: Vec<Vec<f64>> = (0..r.dim()).map(|mu| fd_derivative(checked, r, mu, plan)).collect::<Result<_>>()?;
    let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| p * q).sum::<f64>();
    let b2 = 0.25 - dot(&a, &a);
    Ok(MetricTensor::from_fn(r.dim(), |m, n| {
        dot(&da[m], &da[n]) + dot(&a, &da[m]) * dot(&a, &da[n]) / b2
    }))
}

/// Uhlmann fidelity `Tr sqrt(sqrt(rho1) rho2 sqrt(rho1))`, evaluated as the
/// nuclear norm of `sqrt(rho1) sqrt(rho2)` and clamped to `[0, 1]`.
pub fn uhlmann_fidelity(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho1.dim(),
            got: rho2.dim(),
        });
    }
    let m = rho1.sqrt().matrix() * rho2.sqrt().matrix();
    let n = m.nrows();
    let svd = SVD::try_new(m, false, false, f64::EPSILON, 10_000).ok_or(Error::SvdNonConvergence(n))?;
    Ok(svd.singular_values.iter().sum::<f64>().clamp(0.0, 1.0))
}

/// `d_B^2 = 2 - 2F`.
pub fn bures_distance_squared(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    Ok((2.0 - 2.0 * uhlmann_fidelity(rho1, rho2)?).clamp(0.0, 2.0))
}

pub fn bures_distance(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    Ok(bures_distance_squared(rho1, rho2)?.sqrt())
}

/// Minimum spectral gap for the eigenbasis pairing of the Sjoqvist distance.
pub const SJOQVIST_MIN_GAP: f64 = 1e-10;

/// Pairing `n -> pi(n)` of eigenvectors maximizing `sum_n |<n|pi(n)'>|`.
/// Exhaustive up to N = 8, greedy beyond.
fn overlap_pairing(overlaps: &DMatrix<f64>) -> Vec<usize> {
    let n = overlaps.nrows();
    if n <= 8 {
        let mut best = (f64::NEG_INFINITY, Vec::new());
        let mut perm: Vec<usize> = (0..n).collect();
        permute(&mut perm, 0, overlaps, &mut best);
        best.1
    } else {
        let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
        pairs.sort_by(|a, b| overlaps[*b].total_cmp(&overlaps[*a]).then(a.cmp(b)));
        let mut out = vec![usize::MAX; n];
        let mut used = vec![false; n];
        for (i, j) in pairs {
            if out[i] == usize::MAX && !used[j] {
                out[i] = j;
                used[j] = true;
            }
        }
        out
    }
}

fn permute(perm: &mut Vec<usize>, at: usize, overlaps: &DMatrix<f64>, best: &mut (f64, Vec<usize>)) {
    if at == perm.len() {
        let score: f64 = perm.iter().enumerate().map(|(i, &j)| overlaps[(i, j)]).sum();
        if score > best.0 {
            *best = (score, perm.clone());
        }
        return;
    }
    for i in at..perm.len() {
        perm.swap(at, i);
        permute(perm, at + 1, overlaps, best);
        perm.swap(at, i);
    }
}

/// `d_S^2 = 2 - 2 sum_n sqrt(l_n l'_n) |<n|n'>|` with eigenvectors paired by
/// maximal total overlap.
pub fn sjoqvist_distance_squared(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho1.dim(),
            got: rho2.dim(),
        });
    }
    for rho in [rho1, rho2] {
        let gap = rho.spectrum().min_gap();
        if gap < SJOQVIST_MIN_GAP {
            return Err(Error::Degenerate {
                gap,
                threshold: SJOQVIST_MIN_GAP,
            });
        }
    }
    let (s1, s2) = (rho1.spectrum(), rho2.spectrum());
    let overlaps = (s1.eigenvectors.adjoint() * &s2.eigenvectors).map(|z| z.norm());
    let pairing = overlap_pairing(&overlaps);
    let f: f64 = pairing
        .iter()
        .enumerate()
        .map(|(i, &j)| (s1.eigenvalues[i] * s2.eigenvalues[j]).sqrt() * overlaps[(i, j)])
        .sum();
    Ok((2.0 - 2.0 * f).clamp(0.0, 2.0))
}

pub fn sjoqvist_distance(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    Ok(sjoqvist_distance_squared(rho1, rho2)?.sqrt())
}

/// Largest Bures distance allowed between consecutive holonomy loop points.
pub const MAX_HOLONOMY_STEP: f64 = 0.1;

/// Path-ordered product of `exp(-A_U(R_mid) . dR)` over the loop segments,
/// later segments multiplying on the left. The connection is evaluated at
/// segment midpoints.
pub fn uhlmann_holonomy(model: &ParameterizedModel, path: &ParamLoop, plan: &DifferentiationPlan) -> Result<CMatrix> {
    let pts = path.points();
    let states: Vec<DensityMatrix> = pts.iter().map(|p| model.rho(p)).collect::<Result<_>>()?;
    for (i, w) in states.windows(2).enumerate() {
        let d = bures_distance(&w[0], &w[1])?;
        if !(d < MAX_HOLONOMY_STEP) {
            return Err(Error::UnderResolvedLoop(format!(
                "Bures distance {d:.3e} between points {i} and {}",
                i + 1
            )));
        }
    }
    let n = model.dim();
    let mut hol = CMatrix::identity(n, n);
    for w in pts.windows(2) {
        let (a, b) = (w[0].coords(), w[1].coords());
        let delta: Vec<f64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
        let mid = ParamPoint::from(a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect::<Vec<_>>());
        let conn = uhlmann_connection(model, &mid, plan)?;
        let step = expm_anti_hermitian(&(-conn.contract(&delta)))?;
        hol = step * hol;
    }
    Ok(hol)
}

/// A smooth unitary field `U(R) = exp(sum_mu (R - c)^mu G_mu)` with fixed
/// anti-Hermitian generators.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeField {
    pub generators: Vec<CMatrix>,
    pub center: ParamPoint,
}

impl GaugeField {
    pub fn new(generators: Vec<CMatrix>, center: ParamPoint) -> Result<Self> {
        if generators.len() != center.dim() {
            return Err(Error::DimensionMismatch {
                expected: center.dim(),
                got: generators.len(),
            });
        }
        for g in &generators {
            let err = max_abs(&(g + g.adjoint()));
            if err > 1e-10 {
                return Err(Error::NotAntiHermitian(err));
            }
        }
        Ok(GaugeField { generators, center })
    }

    pub fn trivial(n: usize, center: ParamPoint) -> Self {
        GaugeField {
            generators: vec![CMatrix::zeros(n, n); center.dim()],
            center,
        }
    }

    /// Generators with real and imaginary entries uniform in `[-1/2, 1/2]`
    /// before anti-Hermitian projection.
    pub fn random(rng: &mut impl Rng, n: usize, center: ParamPoint) -> Self {
        let generators = (0..center.dim()).map(|_| sample::anti_hermitian(rng, n, 0.5)).collect();
        GaugeField { generators, center }
    }

    /// Gauge with `dU U^dag = -A_U` at the center point.
    pub fn parallel_transport(model: &ParameterizedModel, center: &ParamPoint, plan: &DifferentiationPlan) -> Result<Self> {
        let conn = uhlmann_connection(model, center, plan)?;
        Ok(GaugeField {
            generators: conn.components.into_iter().map(|a| -a).collect(),
            center: center.clone(),
        })
    }

    pub fn unitary(&self, r: &ParamPoint) -> Result<CMatrix> {
        let n = self.generators[0].nrows();
        let mut x = CMatrix::zeros(n, n);
        for ((g, p), c0) in self.generators.iter().zip(r.coords()).zip(self.center.coords()) {
            x += g * c(p - c0, 0.0);
        }
        let u = expm_anti_hermitian(&x)?;
        let err = unitarity_error(&u);
        if err > 1e-10 {
            return Err(Error::NotUnitary(err));
        }
        Ok(u)
    }
}

/// Compares the raw purification metric `Re Tr(dW^dag dW)` of
/// `W = sqrt(rho) U` with the Bures metric plus the fiber term
/// `Tr(rho {X_mu, X_nu}) / 2`, `X_mu = i(A_mu + d_mu U U^dag)`.
pub fn check_mixed_pythagorean(
    model: &ParameterizedModel,
    r: &ParamPoint,
    gauge: &GaugeField,
    plan: &DifferentiationPlan,
) -> Result<PythagoreanReport> {
    mixed_pythagorean_with_sign(model, r, gauge, plan, 1.0)
}

/// [`check_mixed_pythagorean`] with the connection scaled by `sign`; a sign
/// of `-1` is a deliberate corruption used to exercise the check itself.
#[doc(hidden)]
pub fn mixed_pythagorean_with_sign(
    model: &ParameterizedModel,
    r: &ParamPoint,
    gauge: &GaugeField,
    plan: &DifferentiationPlan,
    sign: f64,
) -> Result<PythagoreanReport> {
    let k = r.dim();
    let jet = thermal_jet(model, r, plan)?;
    let base = jet.bures_metric();
    let rho = jet.rho();
    let conn = jet.uhlmann_connection();

    let w_field = |p: &ParamPoint| -> Result<CMatrix> { Ok(model.rho(p)?.sqrt().matrix() * gauge.unitary(p)?) };
    let dw: Vec<CMatrix> = (0..k).map(|mu| fd_derivative(w_field, r, mu, plan)).collect::<Result<_>>()?;
    let raw = MetricTensor::from_fn(k, |m, n| trace_product(&dw[m].adjoint(), &dw[n]).re);

    let u = gauge.unitary(r)?;
    let du: Vec<CMatrix> = (0..k)
        .map(|mu| fd_derivative(|p: &ParamPoint| gauge.unitary(p), r, mu, plan))
        .collect::<Result<_>>()?;
    let x: Vec<CMatrix> = (0..k)
        .map(|mu| (&conn.components[mu] * c(sign, 0.0) + &du[mu] * u.adjoint()) * c(0.0, 1.0))
        .collect();
    let fiber = MetricTensor::from_fn(k, |m, n| {
        let anti = &x[m] * &x[n] + &x[n] * &x[m];
        0.5 * trace_product(&rho, &anti).re
    });
    Ok(pythagorean_report(raw, base, fiber))
}

/// One inverse temperature of a zero-temperature sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub beta: f64,
    pub bures: MetricTensor,
    /// `|g^B(beta) - g^FS|_max`.
    pub deviation: f64,
}

/// Bures metric of the Gibbs state of `model` at each `beta`, compared with
/// the ground-state Fubini-Study metric at `r`.
pub fn zero_temperature_sweep(
    model: &ParameterizedModel,
    r: &ParamPoint,
    betas: &[f64],
    plan: &DifferentiationPlan,
) -> Result<(MetricTensor, Vec<SweepRow>)> {
    let fs = fubini_study_metric(model, r, plan)?;
    let mut rows = Vec::with_capacity(betas.len());
    for &beta in betas {
        let m = model.clone().with_temperature(1.0 / beta)?;
        let bures = bures_metric(&m, r, plan)?;
        rows.push(SweepRow {
            beta,
            deviation: bures.max_abs_diff(&fs),
            bures,
        });
    }
    Ok((fs, rows))
}

/// Gap `E1 - E0` of `H(R)`.
pub fn ground_gap(model: &ParameterizedModel, r: &ParamPoint) -> Result<f64> {
    let e = spectral_decompose(&model.hamiltonian_at(r)?)?.eigenvalues;
    Ok(if e.len() > 1 { e[1] - e[0] } else { f64::INFINITY })
}
