//! Geometry of pure ground states: the quantum geometric tensor, Berry
//! curvature and phase, and the Fubini-Study distance.
//!
//! `g_ij = <d_i psi|d_j psi> - <d_i psi|psi><psi|d_j psi>`, with the metric
//! `Re g_ij` and the curvature form `Omega_ij = -Im g_ij`. Parameter
//! derivatives of states are central differences of a gauge-fixed field.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{
    fd_derivative, fix_phase_at, gauge_pivot, spectral_decompose, CVector, DifferentiationPlan,
    ParamPoint, C64,
};
use crate::states::PureState;
use crate::tensor::{MetricTensor, QGTensor, TwoForm};
use crate::zoo::ParameterizedModel;

/// Minimum `E1 - E0` for a unique ground state.
pub const GROUND_STATE_GAP: f64 = 1e-8;

/// Smallest overlap magnitude accepted between consecutive loop states.
pub const MIN_LOOP_OVERLAP: f64 = 0.1;

/// Gauge-fixed lowest eigenvector of `H(R)`.
pub fn ground_state(model: &ParameterizedModel, r: &ParamPoint) -> Result<PureState> {
    let spec = spectral_decompose(&model.hamiltonian_at(r)?)?;
    check_gap(&spec.eigenvalues)?;
    Ok(PureState::from_unit(spec.eigenvector(0)))
}

fn check_gap(energies: &[f64]) -> Result<()> {
    if energies.len() >= 2 {
        let gap = energies[1] - energies[0];
        if !(gap > GROUND_STATE_GAP) {
            return Err(Error::Degenerate {
                gap,
                threshold: GROUND_STATE_GAP,
            });
        }
    }
    Ok(())
}

/// Ground-state field around `center` suitable for finite differencing.
///
/// At each stencil point the eigenvector of maximal overlap with the central
/// ground state is selected, and its phase is fixed on the central pivot
/// index so the pivot cannot jump between tied entries.
pub fn ground_state_field<'a>(
    model: &'a ParameterizedModel,
    center: &ParamPoint,
) -> Result<impl Fn(&ParamPoint) -> Result<CVector> + 'a> {
    let psi0 = ground_state(model, center)?.amplitudes().clone();
    let pivot = gauge_pivot(&psi0);
    Ok(move |r: &ParamPoint| {
        let spec = spectral_decompose(&model.hamiltonian_at(r)?)?;
        check_gap(&spec.eigenvalues)?;
        let best = (0..spec.dim())
            .max_by(|&a, &b| {
                let oa = psi0.dotc(&spec.eigenvectors.column(a)).norm();
                let ob = psi0.dotc(&spec.eigenvectors.column(b)).norm();
                oa.total_cmp(&ob).then(b.cmp(&a))
            })
            .unwrap_or(0);
        let mut v = spec.eigenvector(best);
        fix_phase_at(&mut v, pivot);
        Ok(v)
    })
}

/// Quantum geometric tensor of an arbitrary normalized state field over `k`
/// parameters. The field must be smooth in `R` (any smooth phase is allowed).
pub fn qgt_from_state_field<F>(field: F, r: &ParamPoint, plan: &DifferentiationPlan) -> Result<QGTensor>
where
    F: Fn(&ParamPoint) -> Result<CVector>,
{
    let psi = field(r)?;
    let derivs = state_derivatives(&field, r, plan)?;
    Ok(qgt_from_derivatives(&psi, &derivs))
}

fn state_derivatives<F>(field: &F, r: &ParamPoint, plan: &DifferentiationPlan) -> Result<Vec<CVector>>
where
    F: Fn(&ParamPoint) -> Result<CVector>,
{
    (0..r.dim()).map(|mu| fd_derivative(field, r, mu, plan)).collect()
}

fn qgt_from_derivatives(psi: &CVector, d: &[CVector]) -> QGTensor {
    let k = d.len();
    let a: Vec<C64> = d.iter().map(|v| psi.dotc(v)).collect();
    QGTensor::new(crate::linalg::CMatrix::from_fn(k, k, |i, j| {
        d[i].dotc(&d[j]) - a[i].conj() * a[j]
    }))
}

pub fn fubini_study_qgt(model: &ParameterizedModel, r: &ParamPoint, plan: &DifferentiationPlan) -> Result<QGTensor> {
    plan.validate_for_extents(&model.extents())?;
    let field = ground_state_field(model, r)?;
    qgt_from_state_field(field, r, plan)
}

/// `Re g_ij`.
pub fn fubini_study_metric(
    model: &ParameterizedModel,
    r: &ParamPoint,
    plan: &DifferentiationPlan,
) -> Result<MetricTensor> {
    Ok(fubini_study_qgt(model, r, plan)?.metric())
}

/// `Omega_ij = -Im g_ij`.
pub fn berry_curvature_form(
    model: &ParameterizedModel,
    r: &ParamPoint,
    plan: &DifferentiationPlan,
) -> Result<TwoForm> {
    Ok(fubini_study_qgt(model, r, plan)?.curvature())
}

/// Berry connection `A_mu = <psi|d_mu psi>` (purely imaginary) of the
/// gauge-fixed ground state.
pub fn berry_connection(
    model: &ParameterizedModel,
    r: &ParamPoint,
    plan: &DifferentiationPlan,
) -> Result<Vec<C64>> {
    let field = ground_state_field(model, r)?;
    let psi = field(r)?;
    let d = state_derivatives(&field, r, plan)?;
    Ok(d.iter().map(|v| psi.dotc(v)).collect())
}

/// A closed path in parameter space.
///
/// The final point coincides with the first, either exactly or up to whole
/// periods `2 pi` in some coordinates (e.g. an azimuth running from 0 to
/// `2 pi`). State-valued quantities close the loop on the first point.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamLoop {
    points: Vec<ParamPoint>,
}

impl ParamLoop {
    pub fn new(points: Vec<ParamPoint>) -> Result<Self> {
        if points.len() < 4 {
            return Err(Error::InvalidLoop(format!(
                "a closed loop needs at least 3 distinct points plus the closing point, got {}",
                points.len()
            )));
        }
        let k = points[0].dim();
        if let Some(p) = points.iter().find(|p| p.dim() != k) {
            return Err(Error::DimensionMismatch {
                expected: k,
                got: p.dim(),
            });
        }
        let first = points[0].coords();
        let last = points[points.len() - 1].coords();
        for (i, (a, b)) in first.iter().zip(last).enumerate() {
            let turns = (b - a) / (2.0 * PI);
            let whole = turns.round();
            if a != b && (turns - whole).abs() > 1e-12 {
                return Err(Error::InvalidLoop(format!(
                    "coordinate {i} does not close: first {a}, last {b}"
                )));
            }
        }
        let open = &points[..points.len() - 1];
        let distinct = open
            .iter()
            .enumerate()
            .filter(|(i, p)| open[..*i].iter().all(|q| q != *p))
            .count();
        if distinct < 3 {
            return Err(Error::InvalidLoop(format!("only {distinct} distinct points")));
        }
        Ok(ParamLoop { points })
    }

    /// `base + t e_mu` for `t` on `n` equal steps of `[0, 2 pi]`.
    pub fn coordinate_circle(base: &ParamPoint, mu: usize, n: usize) -> Result<Self> {
        if mu >= base.dim() {
            return Err(Error::ParameterIndex {
                index: mu,
                count: base.dim(),
            });
        }
        let points = (0..=n)
            .map(|s| {
                let t = if s == n { 2.0 * PI } else { 2.0 * PI * s as f64 / n as f64 };
                base.shifted(mu, t)
            })
            .collect();
        Self::new(points)
    }

    /// `center + cos t u + sin t v` on `n` equal steps; the closing point is
    /// the first point repeated.
    pub fn ellipse(center: &ParamPoint, u: &[f64], v: &[f64], n: usize) -> Result<Self> {
        let mut points: Vec<ParamPoint> = (0..n)
            .map(|s| {
                let t = 2.0 * PI * s as f64 / n as f64;
                ParamPoint::from(
                    center
                        .coords()
                        .iter()
                        .zip(u.iter().zip(v))
                        .map(|(c, (a, b))| c + t.cos() * a + t.sin() * b)
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        points.push(points[0].clone());
        Self::new(points)
    }

    pub fn points(&self) -> &[ParamPoint] {
        &self.points
    }

    /// Points without the closing duplicate.
    pub fn open_points(&self) -> &[ParamPoint] {
        &self.points[..self.points.len() - 1]
    }

    pub fn segments(&self) -> usize {
        self.points.len() - 1
    }

    pub fn reversed(&self) -> ParamLoop {
        let mut points = self.points.clone();
        points.reverse();
        ParamLoop { points }
    }
}

/// Discrete Berry phase `-arg prod_k <psi_k|psi_{k+1}>` in `(-pi, pi]`.
pub fn berry_phase(model: &ParameterizedModel, path: &ParamLoop) -> Result<f64> {
    let states: Vec<PureState> = path
        .open_points()
        .iter()
        .map(|r| ground_state(model, r))
        .collect::<Result<_>>()?;
    berry_phase_of_states(&states)
}

/// Pancharatnam phase of a closed sequence of states (the first state closes
/// the loop).
pub fn berry_phase_of_states(states: &[PureState]) -> Result<f64> {
    let n = states.len();
    let mut prod = C64::new(1.0, 0.0);
    for i in 0..n {
        let ov = states[i].inner(&states[(i + 1) % n]);
        let mag = ov.norm();
        if !(mag >= MIN_LOOP_OVERLAP) {
            return Err(Error::UnderResolvedLoop(format!(
                "overlap {mag:.3e} between points {i} and {}",
                (i + 1) % n
            )));
        }
        prod *= ov / mag;
    }
    Ok(-prod.arg())
}

/// `2 - 2 |<psi1|psi2>|`, the infimum of `|psi1 - e^{i chi} psi2|^2`.
pub fn fubini_study_distance(psi1: &PureState, psi2: &PureState) -> Result<f64> {
    if psi1.dim() != psi2.dim() {
        return Err(Error::DimensionMismatch {
            expected: psi1.dim(),
            got: psi2.dim(),
        });
    }
    Ok((2.0 - 2.0 * psi1.inner(psi2).norm()).clamp(0.0, 2.0))
}

/// Decomposition of a raw metric into base and fiber parts.
#[derive(Debug, Clone, PartialEq)]
pub struct PythagoreanReport {
    pub raw: MetricTensor,
    pub base: MetricTensor,
    pub fiber: MetricTensor,
    /// `|raw - (base + fiber)|_max`.
    pub residual: f64,
}

impl PythagoreanReport {
    fn new(raw: MetricTensor, base: MetricTensor, fiber: MetricTensor) -> Self {
        let residual = raw.max_abs_diff(&base.add(&fiber));
        PythagoreanReport {
            raw,
            base,
            fiber,
            residual,
        }
    }
}

/// Compares `Re <d psi~|d psi~>` for `psi~ = e^{i theta(R)} psi(R)` with
/// `Re g + (d theta - i A)(d theta - i A)`.
pub fn check_pure_pythagorean<T>(
    model: &ParameterizedModel,
    r: &ParamPoint,
    theta_field: T,
    plan: &DifferentiationPlan,
) -> Result<PythagoreanReport>
where
    T: Fn(&ParamPoint) -> f64,
{
    let k = r.dim();
    let field = ground_state_field(model, r)?;
    let psi = field(r)?;
    let d = state_derivatives(&field, r, plan)?;
    let base = qgt_from_derivatives(&psi, &d).metric();

    let dressed = |p: &ParamPoint| -> Result<CVector> { Ok(field(p)? * C64::from_polar(1.0, theta_field(p))) };
    let dd = state_derivatives(&dressed, r, plan)?;
    let raw = MetricTensor::from_fn(k, |i, j| dd[i].dotc(&dd[j]).re);

    let grad: Vec<f64> = (0..k)
        .map(|mu| fd_derivative(|p: &ParamPoint| Ok(theta_field(p)), r, mu, plan))
        .collect::<Result<_>>()?;
    // d theta - i A with A = <psi|d psi> purely imaginary
    let shifted: Vec<f64> = (0..k)
        .map(|mu| {
            let a = psi.dotc(&d[mu]);
            (C64::new(grad[mu], 0.0) - C64::new(0.0, 1.0) * a).re
        })
        .collect();
    let fiber = MetricTensor::from_fn(k, |i, j| shifted[i] * shifted[j]);
    Ok(PythagoreanReport::new(raw, base, fiber))
}

pub(crate) fn pythagorean_report(raw: MetricTensor, base: MetricTensor, fiber: MetricTensor) -> PythagoreanReport {
    PythagoreanReport::new(raw, base, fiber)
}
