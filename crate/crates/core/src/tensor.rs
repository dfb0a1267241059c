//! Rank-2 tensors over a k-dimensional parameter space.

use nalgebra::DMatrix;

use crate::linalg::{CMatrix, C64};

/// Real symmetric k x k tensor. Symmetry is enforced on construction by
/// averaging with the transpose.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricTensor(DMatrix<f64>);

impl MetricTensor {
    pub fn new(m: DMatrix<f64>) -> Self {
        let s = (&m + m.transpose()) * 0.5;
        MetricTensor(s)
    }

    pub fn from_fn(k: usize, f: impl FnMut(usize, usize) -> f64) -> Self {
        Self::new(DMatrix::from_fn(k, k, f))
    }

    pub fn zeros(k: usize) -> Self {
        MetricTensor(DMatrix::zeros(k, k))
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let k = d.len();
        Self::from_fn(k, |i, j| if i == j { d[i] } else { 0.0 })
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    /// `g_{mu nu} delta^mu delta^nu`.
    pub fn quadratic_form(&self, delta: &[f64]) -> f64 {
        let k = self.dim();
        let mut acc = 0.0;
        for i in 0..k {
            for j in 0..k {
                acc += self.0[(i, j)] * delta[i] * delta[j];
            }
        }
        acc
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| f64::max(m, x.abs()))
    }

    pub fn max_abs_diff(&self, other: &MetricTensor) -> f64 {
        (&self.0 - &other.0).iter().fold(0.0, |m, x| f64::max(m, x.abs()))
    }

    pub fn scale(&self, s: f64) -> Self {
        MetricTensor(&self.0 * s)
    }

    pub fn add(&self, other: &MetricTensor) -> Self {
        MetricTensor(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &MetricTensor) -> Self {
        MetricTensor(&self.0 - &other.0)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        if self.dim() == 0 {
            return 0.0;
        }
        self.0
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .fold(f64::INFINITY, |m, &x| m.min(x))
    }

    /// Positive semi-definite up to `tol`.
    pub fn is_psd(&self, tol: f64) -> bool {
        self.min_eigenvalue() >= -tol
    }

    /// Row-major components `(i, j, value)`.
    pub fn components(&self) -> Vec<f64> {
        let k = self.dim();
        (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).map(|(i, j)| self.0[(i, j)]).collect()
    }
}

/// Real antisymmetric k x k tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoForm(DMatrix<f64>);

impl TwoForm {
    pub fn new(m: DMatrix<f64>) -> Self {
        TwoForm((&m - m.transpose()) * 0.5)
    }

    pub fn zeros(k: usize) -> Self {
        TwoForm(DMatrix::zeros(k, k))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| f64::max(m, x.abs()))
    }

    pub fn components(&self) -> Vec<f64> {
        self.0.transpose().iter().copied().collect()
    }
}

/// Complex Hermitian k x k tensor `g_ij`. Its real part is a metric and its
/// negative imaginary part a two-form.
#[derive(Debug, Clone, PartialEq)]
pub struct QGTensor(CMatrix);

impl QGTensor {
    pub fn new(m: CMatrix) -> Self {
        QGTensor((&m + m.adjoint()) * C64::new(0.5, 0.0))
    }

    pub fn zeros(k: usize) -> Self {
        QGTensor(CMatrix::zeros(k, k))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn metric(&self) -> MetricTensor {
        MetricTensor::new(self.0.map(|z| z.re))
    }

    /// `Omega_ij = -Im g_ij`.
    pub fn curvature(&self) -> TwoForm {
        TwoForm::new(self.0.map(|z| -z.im))
    }

    pub fn max_abs_diff(&self, other: &QGTensor) -> f64 {
        (&self.0 - &other.0).iter().fold(0.0, |m, z| f64::max(m, z.norm()))
    }

    /// Row-major `(Re, Im)` pairs.
    pub fn components(&self) -> Vec<(f64, f64)> {
        self.0.transpose().iter().map(|z| (z.re, z.im)).collect()
    }
}
