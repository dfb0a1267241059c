//! Dense complex Hermitian linear algebra and finite differences over
//! parameter space.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Largest anti-Hermitian part accepted by [`HermitianOperator::new`].
pub const HERMITICITY_TOLERANCE: f64 = 1e-9;

const EIGEN_MAX_ITERATIONS: usize = 10_000;

/// Relative tolerance under which two entry magnitudes count as tied when
/// choosing the gauge pivot.
const PIVOT_TIE_TOLERANCE: f64 = 1e-12;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub(crate) fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

/// `Tr(a b)` without forming the product.
pub(crate) fn trace_product(a: &CMatrix, b: &CMatrix) -> C64 {
    let n = a.nrows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// `|U^dag U - I|_max`.
pub fn unitarity_error(u: &CMatrix) -> f64 {
    let n = u.nrows();
    max_abs(&(u.adjoint() * u - CMatrix::identity(n, n)))
}

/// An N x N complex Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator(CMatrix);

impl HermitianOperator {
    /// Validates and symmetrizes `m`. Inputs whose anti-Hermitian part
    /// exceeds [`HERMITICITY_TOLERANCE`] in max-norm are rejected.
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        let anti = (&m - m.adjoint()) * C64::new(0.5, 0.0);
        let err = max_abs(&anti);
        if !err.is_finite() || err > HERMITICITY_TOLERANCE {
            return Err(Error::NotHermitian(err));
        }
        Ok(Self::symmetrized(m))
    }

    /// Hermitian part `(m + m^dag)/2` without validation.
    pub(crate) fn symmetrized(m: CMatrix) -> Self {
        let h = (&m + m.adjoint()) * C64::new(0.5, 0.0);
        HermitianOperator(h)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        HermitianOperator(CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                c(diag[i], 0.0)
            } else {
                c(0.0, 0.0)
            }
        }))
    }

    pub fn identity(n: usize) -> Self {
        HermitianOperator(CMatrix::identity(n, n))
    }

    pub fn zeros(n: usize) -> Self {
        HermitianOperator(CMatrix::zeros(n, n))
    }

    pub fn pauli_x() -> Self {
        HermitianOperator(CMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        ))
    }

    pub fn pauli_y() -> Self {
        HermitianOperator(CMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)],
        ))
    }

    pub fn pauli_z() -> Self {
        Self::from_real_diagonal(&[1.0, -1.0])
    }

    /// `(sigma_x, sigma_y, sigma_z)`.
    pub fn paulis() -> [Self; 3] {
        [Self::pauli_x(), Self::pauli_y(), Self::pauli_z()]
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn scale(&self, s: f64) -> Self {
        HermitianOperator(&self.0 * c(s, 0.0))
    }

    pub fn add(&self, other: &Self) -> Self {
        HermitianOperator(&self.0 + &other.0)
    }

    pub fn trace(&self) -> f64 {
        trace(&self.0).re
    }
}

/// Ascending eigenvalues with gauge-fixed orthonormal eigenvectors (columns).
///
/// Gauge convention: in every eigenvector the entry of largest magnitude is
/// real and strictly positive, ties going to the lowest index.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, i: usize) -> CVector {
        self.eigenvectors.column(i).into_owned()
    }

    /// `sum_i f(lambda_i) |i><i|`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let values: Vec<f64> = self.eigenvalues.iter().map(|&x| f(x)).collect();
        self.reconstruct_values(&values)
    }

    /// `sum_i w_i |i><i|`.
    pub fn reconstruct_values(&self, weights: &[f64]) -> CMatrix {
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (j, &w) in weights.iter().enumerate() {
            scaled.column_mut(j).scale_mut(w);
        }
        scaled * v.adjoint()
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.reconstruct_with(|x| x)
    }

    /// Smallest gap between consecutive eigenvalues (infinite for N = 1).
    pub fn min_gap(&self) -> f64 {
        self.eigenvalues
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }
}

/// Index of the gauge pivot: the entry of largest magnitude, lowest index on
/// ties.
pub fn gauge_pivot(v: &CVector) -> usize {
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let cutoff = max * (1.0 - PIVOT_TIE_TOLERANCE);
    v.iter().position(|z| z.norm() >= cutoff).unwrap_or(0)
}

/// Rotates `v` by a global phase so that `v[pivot]` is real and positive.
pub fn fix_phase_at(v: &mut CVector, pivot: usize) {
    let z = v[pivot];
    let r = z.norm();
    if r > 0.0 {
        let phase = z.conj() / r;
        for x in v.iter_mut() {
            *x *= phase;
        }
        // exact zero imaginary part at the pivot
        v[pivot] = c(v[pivot].re, 0.0);
    }
}

/// Applies the largest-entry-real-positive convention.
pub fn gauge_fix(v: &mut CVector) {
    let p = gauge_pivot(v);
    fix_phase_at(v, p);
}

/// Eigen-decomposition of a Hermitian operator with ascending eigenvalues and
/// gauge-fixed eigenvectors. Deterministic for identical input bits.
pub fn spectral_decompose(a: &HermitianOperator) -> Result<SpectralDecomposition> {
    let n = a.dim();
    let m = a.matrix();
    let max_entry = max_abs(m);
    if m.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::EigenNonConvergence {
            dim: n,
            max_entry: f64::NAN,
            finite: false,
        });
    }
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, EIGEN_MAX_ITERATIONS).ok_or(
        Error::EigenNonConvergence {
            dim: n,
            max_entry,
            finite: true,
        },
    )?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut eigenvectors = CMatrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        let mut v: CVector = eig.eigenvectors.column(src).into_owned();
        let norm = v.norm();
        v.unscale_mut(norm);
        gauge_fix(&mut v);
        eigenvectors.set_column(col, &v);
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// `sum_i f(lambda_i) |i><i|`. Fails with the offending eigenvalue when `f`
/// returns a non-finite value.
pub fn matrix_function(a: &HermitianOperator, f: impl Fn(f64) -> f64) -> Result<HermitianOperator> {
    let spec = spectral_decompose(a)?;
    spectral_function(&spec, f)
}

pub(crate) fn spectral_function(
    spec: &SpectralDecomposition,
    f: impl Fn(f64) -> f64,
) -> Result<HermitianOperator> {
    let mut values = Vec::with_capacity(spec.dim());
    for &x in &spec.eigenvalues {
        let y = f(x);
        if !y.is_finite() {
            return Err(Error::FunctionDomain { eigenvalue: x });
        }
        values.push(y);
    }
    let out = spec.reconstruct_values(&values);
    Ok(HermitianOperator::symmetrized(out))
}

/// Eigenvalues in `[-1e-12, 0)` are clipped to zero before taking roots.
pub const SQRT_CLIP: f64 = 1e-12;

pub(crate) fn clipped_sqrt(x: f64) -> f64 {
    if x >= 0.0 {
        x.sqrt()
    } else if x >= -SQRT_CLIP {
        0.0
    } else {
        f64::NAN
    }
}

/// Principal square root of a positive semi-definite Hermitian operator.
pub fn matrix_sqrt(a: &HermitianOperator) -> Result<HermitianOperator> {
    matrix_function(a, clipped_sqrt)
}

/// `exp(x)` for anti-Hermitian `x`, computed spectrally from the Hermitian
/// matrix `i x`. The result is unitary to rounding.
pub fn expm_anti_hermitian(x: &CMatrix) -> Result<CMatrix> {
    let n = x.nrows();
    let anti = max_abs(&(x + x.adjoint()));
    if anti > HERMITICITY_TOLERANCE * (1.0 + max_abs(x)) {
        return Err(Error::NotAntiHermitian(anti));
    }
    // x = -i K with K = i x Hermitian, so exp(x) = exp(-i K).
    let k = HermitianOperator::symmetrized(x * c(0.0, 1.0));
    let spec = spectral_decompose(&k)?;
    let v = &spec.eigenvectors;
    let mut scaled = v.clone();
    for j in 0..n {
        let phase = C64::from_polar(1.0, -spec.eigenvalues[j]);
        for i in 0..n {
            scaled[(i, j)] *= phase;
        }
    }
    Ok(scaled * v.adjoint())
}

/// A point `R = (R^1, ..., R^k)` in parameter space.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamPoint(Vec<f64>);

impl ParamPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if let Some(x) = coords.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidPoint(format!("non-finite coordinate {x}")));
        }
        Ok(ParamPoint(coords))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `R + t e_mu`.
    pub fn shifted(&self, mu: usize, t: f64) -> ParamPoint {
        let mut v = self.0.clone();
        v[mu] += t;
        ParamPoint(v)
    }

    /// `R + t delta`.
    pub fn displaced(&self, delta: &[f64], t: f64) -> ParamPoint {
        ParamPoint(self.0.iter().zip(delta).map(|(x, d)| x + t * d).collect())
    }
}

impl From<Vec<f64>> for ParamPoint {
    /// Unchecked conversion; prefer [`ParamPoint::new`] for external input.
    fn from(v: Vec<f64>) -> Self {
        ParamPoint(v)
    }
}

impl<const K: usize> From<[f64; K]> for ParamPoint {
    fn from(v: [f64; K]) -> Self {
        ParamPoint(v.to_vec())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdScheme {
    /// `(f(x+h) - f(x-h)) / 2h`, error O(h^2).
    Central2,
    /// `(-f(x+2h) + 8f(x+h) - 8f(x-h) + f(x-2h)) / 12h`, error O(h^4).
    Central4,
}

impl FdScheme {
    pub fn name(self) -> &'static str {
        match self {
            FdScheme::Central2 => "central-2",
            FdScheme::Central4 => "central-4",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "central-2" | "central2" => Some(FdScheme::Central2),
            "central-4" | "central4" => Some(FdScheme::Central4),
            _ => None,
        }
    }

    fn stencil(self) -> &'static [(f64, f64)] {
        // (offset in units of h, weight in units of 1/h)
        match self {
            FdScheme::Central2 => &[(1.0, 0.5), (-1.0, -0.5)],
            FdScheme::Central4 => &[
                (2.0, -1.0 / 12.0),
                (1.0, 8.0 / 12.0),
                (-1.0, -8.0 / 12.0),
                (-2.0, 1.0 / 12.0),
            ],
        }
    }
}

/// Step size and stencil for central finite differences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DifferentiationPlan {
    pub step: f64,
    pub scheme: FdScheme,
}

impl Default for DifferentiationPlan {
    fn default() -> Self {
        DifferentiationPlan {
            step: 1e-5,
            scheme: FdScheme::Central2,
        }
    }
}

impl DifferentiationPlan {
    pub fn new(step: f64, scheme: FdScheme) -> Result<Self> {
        let plan = DifferentiationPlan { step, scheme };
        plan.validate()?;
        Ok(plan)
    }

    /// Central-4 with `h = 1e-3`, used for low-temperature comparisons.
    pub fn central4() -> Self {
        DifferentiationPlan {
            step: 1e-3,
            scheme: FdScheme::Central4,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::InvalidPlan(format!(
                "step must be positive and finite, got {}",
                self.step
            )));
        }
        Ok(())
    }

    /// Checks `h` against the extent of each domain interval (`h < 1e-2 * extent`).
    pub fn validate_for_extents(&self, extents: &[f64]) -> Result<()> {
        self.validate()?;
        for (i, &e) in extents.iter().enumerate() {
            if e.is_finite() && self.step >= 1e-2 * e {
                return Err(Error::InvalidPlan(format!(
                    "step {} is not below 1e-2 of the extent {} of coordinate {}",
                    self.step, e, i
                )));
            }
        }
        Ok(())
    }

    pub fn describe(&self) -> String {
        format!("{} h={:?}", self.scheme.name(), self.step)
    }
}

/// Values that finite differences can combine linearly.
pub trait FdValue: Sized {
    fn lincomb(terms: &[(f64, Self)]) -> Self;
}

impl FdValue for f64 {
    fn lincomb(terms: &[(f64, Self)]) -> Self {
        terms.iter().map(|(w, x)| w * x).sum()
    }
}

impl FdValue for C64 {
    fn lincomb(terms: &[(f64, Self)]) -> Self {
        terms.iter().map(|(w, x)| x * *w).sum()
    }
}

impl FdValue for CMatrix {
    fn lincomb(terms: &[(f64, Self)]) -> Self {
        let (r, cdim) = terms[0].1.shape();
        let mut acc = CMatrix::zeros(r, cdim);
        for (w, m) in terms {
            acc.zip_apply(m, |a, b| *a += b * *w);
        }
        acc
    }
}

impl FdValue for CVector {
    fn lincomb(terms: &[(f64, Self)]) -> Self {
        let n = terms[0].1.len();
        let mut acc = CVector::zeros(n);
        for (w, v) in terms {
            acc.zip_apply(v, |a, b| *a += b * *w);
        }
        acc
    }
}

impl FdValue for Vec<f64> {
    fn lincomb(terms: &[(f64, Self)]) -> Self {
        let n = terms[0].1.len();
        let mut acc = vec![0.0; n];
        for (w, v) in terms {
            for (a, b) in acc.iter_mut().zip(v) {
                *a += w * b;
            }
        }
        acc
    }
}

/// Central-difference estimate of `d field / d R^mu` at `r`.
///
/// Eigenvector-valued fields must gauge fix (and track branches) inside the
/// closure; evaluation errors such as leaving the domain are propagated.
pub fn fd_derivative<T, F>(field: F, r: &ParamPoint, mu: usize, plan: &DifferentiationPlan) -> Result<T>
where
    T: FdValue,
    F: Fn(&ParamPoint) -> Result<T>,
{
    plan.validate()?;
    if mu >= r.dim() {
        return Err(Error::ParameterIndex {
            index: mu,
            count: r.dim(),
        });
    }
    let h = plan.step;
    let mut terms = Vec::with_capacity(4);
    for &(offset, weight) in plan.scheme.stencil() {
        let value = field(&r.shifted(mu, offset * h))?;
        terms.push((weight / h, value));
    }
    Ok(T::lincomb(&terms))
}
