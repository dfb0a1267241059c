//! Pure states, density matrices, Gibbs states, N = 2 Bloch vectors and
//! purifications.
//!
//! A purification `W` of `rho` satisfies `rho = W W^dag`. The vector `|W>` in
//! `H (x) H*` is never materialized: inner products of purified states are
//! evaluated as `<W1|W2> = Tr(W1^dag W2)`. Were the vector needed, it would be
//! `|W> = sum_i sqrt(lambda_i) |i> (x) (<i|U)^T`, i.e. the row `<i|U` enters
//! transposed.

use nalgebra::Vector3;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{
    c, clipped_sqrt, max_abs, spectral_decompose, trace, unitarity_error, CMatrix, CVector,
    HermitianOperator, SpectralDecomposition, C64,
};

/// Tolerance on `<psi|psi> = 1` and `Tr rho = 1`.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;
/// Default threshold below which an eigenvalue counts as zero.
pub const DEFAULT_RANK_TOLERANCE: f64 = 1e-12;
/// Tolerance on `U^dag U = I` for purification phases.
pub const UNITARITY_TOLERANCE: f64 = 1e-10;

/// A normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState(CVector);

impl PureState {
    pub fn new(amplitudes: CVector) -> Result<Self> {
        let n2 = amplitudes.norm_squared();
        if !((n2 - 1.0).abs() <= NORMALIZATION_TOLERANCE) {
            return Err(Error::NotNormalized(n2));
        }
        Ok(PureState(amplitudes))
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(amplitudes: CVector) -> Result<Self> {
        let n = amplitudes.norm();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::NotNormalized(n * n));
        }
        Ok(PureState(amplitudes.unscale(n)))
    }

    pub(crate) fn from_unit(amplitudes: CVector) -> Self {
        PureState(amplitudes)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.0
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> C64 {
        self.0.dotc(&other.0)
    }

    pub fn projector(&self) -> CMatrix {
        &self.0 * self.0.adjoint()
    }

    /// `e^{i chi} |psi>`.
    pub fn with_phase(&self, chi: f64) -> PureState {
        PureState(&self.0 * C64::from_polar(1.0, chi))
    }

    /// `<psi|A|psi>`.
    pub fn expectation(&self, a: &CMatrix) -> C64 {
        self.0.dotc(&(a * &self.0))
    }
}

/// A trace-one positive semi-definite Hermitian operator with its cached
/// spectral decomposition (eigenvalues clipped at zero).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    op: HermitianOperator,
    spectrum: SpectralDecomposition,
    rank_tolerance: f64,
}

impl DensityMatrix {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let tr = op.trace();
        if !((tr - 1.0).abs() <= NORMALIZATION_TOLERANCE) {
            return Err(Error::InvalidTrace(tr));
        }
        let mut spectrum = spectral_decompose(&op)?;
        if let Some(&neg) = spectrum.eigenvalues.iter().find(|&&x| x < -crate::linalg::SQRT_CLIP) {
            return Err(Error::NegativeEigenvalue(neg));
        }
        for x in spectrum.eigenvalues.iter_mut() {
            *x = x.max(0.0);
        }
        Ok(DensityMatrix {
            op,
            spectrum,
            rank_tolerance: DEFAULT_RANK_TOLERANCE,
        })
    }

    /// Normalizes a PSD matrix by its trace.
    pub fn from_unnormalized(m: CMatrix) -> Result<Self> {
        let tr = trace(&m).re;
        if !(tr.is_finite() && tr > 0.0) {
            return Err(Error::InvalidTrace(tr));
        }
        Self::new(HermitianOperator::new(m.unscale(tr))?)
    }

    pub fn from_pure(psi: &PureState) -> Result<Self> {
        Self::new(HermitianOperator::symmetrized(psi.projector()))
    }

    /// Builds `rho` from an ascending spectrum and matching eigenvectors
    /// without re-diagonalizing.
    pub(crate) fn from_spectrum(spectrum: SpectralDecomposition, rank_tolerance: f64) -> Self {
        let op = HermitianOperator::symmetrized(spectrum.reconstruct());
        DensityMatrix {
            op,
            spectrum,
            rank_tolerance,
        }
    }

    pub fn with_rank_tolerance(mut self, tol: f64) -> Self {
        self.rank_tolerance = tol;
        self
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn matrix(&self) -> &CMatrix {
        self.op.matrix()
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.spectrum.eigenvalues
    }

    pub fn rank_tolerance(&self) -> f64 {
        self.rank_tolerance
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.spectrum.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn full_rank(&self) -> bool {
        self.min_eigenvalue() > self.rank_tolerance
    }

    pub(crate) fn require_full_rank(&self) -> Result<()> {
        if self.full_rank() {
            Ok(())
        } else {
            Err(Error::RankDeficient {
                min_eigenvalue: self.min_eigenvalue(),
                tolerance: self.rank_tolerance,
            })
        }
    }

    pub fn sqrt(&self) -> HermitianOperator {
        HermitianOperator::symmetrized(self.spectrum.reconstruct_with(clipped_sqrt))
    }

    pub fn purity(&self) -> f64 {
        self.spectrum.eigenvalues.iter().map(|x| x * x).sum()
    }

    /// `V rho V^dag` for unitary `V`.
    pub fn conjugated(&self, v: &CMatrix) -> Result<Self> {
        Self::new(HermitianOperator::symmetrized(v * self.matrix() * v.adjoint()))
    }
}

/// Gibbs state `e^{-H/T} / Tr e^{-H/T}`.
///
/// Weights are evaluated with the lowest energy shifted to zero, so extreme
/// `beta` never overflows; the result is always strictly positive unless a
/// weight underflows to zero. The returned state has rank tolerance zero.
pub fn gibbs_state(h: &HermitianOperator, temperature: f64) -> Result<DensityMatrix> {
    if !(temperature.is_finite() && temperature > 0.0) {
        return Err(Error::InvalidTemperature(temperature));
    }
    let spec = spectral_decompose(h)?;
    Ok(gibbs_from_spectrum(&spec, 1.0 / temperature))
}

/// Gibbs weights for ascending energies, in the same (descending-weight)
/// order.
pub(crate) fn gibbs_weights(energies: &[f64], beta: f64) -> Vec<f64> {
    let e0 = energies[0];
    let w: Vec<f64> = energies.iter().map(|e| (-beta * (e - e0)).exp()).collect();
    let z: f64 = w.iter().sum();
    w.into_iter().map(|x| x / z).collect()
}

pub(crate) fn gibbs_from_spectrum(spec: &SpectralDecomposition, beta: f64) -> DensityMatrix {
    let n = spec.dim();
    let weights = gibbs_weights(&spec.eigenvalues, beta);
    // ascending weights = descending energies
    let mut vectors = CMatrix::zeros(n, n);
    let mut values = Vec::with_capacity(n);
    for (col, src) in (0..n).rev().enumerate() {
        vectors.set_column(col, &spec.eigenvectors.column(src));
        values.push(weights[src]);
    }
    DensityMatrix::from_spectrum(
        SpectralDecomposition {
            eigenvalues: values,
            eigenvectors: vectors,
        },
        0.0,
    )
}

/// Bloch vector `a` of a qubit state `rho = 1/2 + a . sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector(pub Vector3<f64>);

impl BlochVector {
    pub fn new(a: [f64; 3]) -> Result<Self> {
        let v = Vector3::from(a);
        if !v.iter().all(|x| x.is_finite()) || v.norm() > 0.5 + NORMALIZATION_TOLERANCE {
            return Err(Error::PurityBoundary(v.norm()));
        }
        Ok(BlochVector(v))
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn components(&self) -> [f64; 3] {
        [self.0.x, self.0.y, self.0.z]
    }
}

/// `a_i = Tr(rho sigma_i) / 2`.
pub fn bloch_decompose(rho: &DensityMatrix) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(Error::UnsupportedDimension(rho.dim()));
    }
    let paulis = HermitianOperator::paulis();
    let a = [0, 1, 2].map(|i| 0.5 * crate::linalg::trace_product(rho.matrix(), paulis[i].matrix()).re);
    Ok(BlochVector(Vector3::from(a)))
}

/// `rho = 1/2 + a . sigma`.
pub fn bloch_compose(a: &BlochVector) -> Result<DensityMatrix> {
    DensityMatrix::new(bloch_operator(&a.0))
}

pub(crate) fn bloch_operator(a: &Vector3<f64>) -> HermitianOperator {
    let m = CMatrix::from_row_slice(
        2,
        2,
        &[
            c(0.5 + a.z, 0.0),
            c(a.x, -a.y),
            c(a.x, a.y),
            c(0.5 - a.z, 0.0),
        ],
    );
    HermitianOperator::symmetrized(m)
}

/// A purification `W = sqrt(rho) U` with its polar factors.
#[derive(Debug, Clone, PartialEq)]
pub struct Amplitude {
    pub w: CMatrix,
    pub sqrt_rho: HermitianOperator,
    pub phase: CMatrix,
}

impl Amplitude {
    pub fn rho(&self) -> CMatrix {
        &self.w * self.w.adjoint()
    }
}

/// `W = sqrt(rho) U` for full-rank `rho` and unitary `U`.
pub fn purify(rho: &DensityMatrix, u: &CMatrix) -> Result<Amplitude> {
    rho.require_full_rank()?;
    if u.shape() != (rho.dim(), rho.dim()) {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: u.nrows(),
        });
    }
    let err = unitarity_error(u);
    if !(err <= UNITARITY_TOLERANCE) {
        return Err(Error::NotUnitary(err));
    }
    let sqrt_rho = rho.sqrt();
    Ok(Amplitude {
        w: sqrt_rho.matrix() * u,
        sqrt_rho,
        phase: u.clone(),
    })
}

/// Hilbert-Schmidt product `Tr(A^dag B)`.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> Result<C64> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows() * a.ncols(),
            got: b.nrows() * b.ncols(),
        });
    }
    Ok(a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum())
}

/// `|A - B|_max` for operators of equal shape.
pub fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    max_abs(&(a - b))
}

/// Seeded random states and unitaries for tests and verification suites.
pub mod sample {
    use super::*;
    use crate::linalg::expm_anti_hermitian;

    fn uniform_complex(rng: &mut impl Rng) -> C64 {
        c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    }

    pub fn complex_matrix(rng: &mut impl Rng, n: usize) -> CMatrix {
        CMatrix::from_fn(n, n, |_, _| uniform_complex(rng))
    }

    /// Hermitian matrix with entries uniform in the unit square.
    pub fn hermitian(rng: &mut impl Rng, n: usize) -> HermitianOperator {
        HermitianOperator::symmetrized(complex_matrix(rng, n))
    }

    /// Anti-Hermitian matrix with real and imaginary parts uniform in
    /// `[-scale, scale]`.
    pub fn anti_hermitian(rng: &mut impl Rng, n: usize, scale: f64) -> CMatrix {
        let m = CMatrix::from_fn(n, n, |_, _| {
            c(rng.gen_range(-scale..=scale), rng.gen_range(-scale..=scale))
        });
        (&m - m.adjoint()) * c(0.5, 0.0)
    }

    pub fn unitary(rng: &mut impl Rng, n: usize) -> CMatrix {
        let x = anti_hermitian(rng, n, std::f64::consts::PI);
        expm_anti_hermitian(&x).expect("anti-Hermitian by construction")
    }

    pub fn pure_state(rng: &mut impl Rng, n: usize) -> PureState {
        loop {
            let v = CVector::from_fn(n, |_, _| uniform_complex(rng));
            if let Ok(psi) = PureState::normalized(v) {
                return psi;
            }
        }
    }

    /// `G G^dag / Tr(G G^dag)` with uniform `G`; full rank almost surely.
    pub fn density_matrix(rng: &mut impl Rng, n: usize) -> DensityMatrix {
        loop {
            let g = complex_matrix(rng, n);
            if let Ok(rho) = DensityMatrix::from_unnormalized(&g * g.adjoint()) {
                if rho.full_rank() {
                    return rho;
                }
            }
        }
    }

    /// A random pair of commuting density matrices sharing a random eigenbasis.
    pub fn commuting_pair(rng: &mut impl Rng, n: usize) -> (DensityMatrix, DensityMatrix) {
        let v = unitary(rng, n);
        let mut diag = || {
            let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
            let s: f64 = w.iter().sum();
            let d = CMatrix::from_diagonal(&CVector::from_iterator(n, w.iter().map(|x| c(x / s, 0.0))));
            DensityMatrix::new(HermitianOperator::symmetrized(&v * d * v.adjoint())).expect("valid by construction")
        };
        let a = diag();
        let b = diag();
        (a, b)
    }
}
