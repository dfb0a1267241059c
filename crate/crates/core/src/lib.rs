//! Quantum geometric tensor of pure and mixed quantum states.
//!
//! The crate computes the local geometry of parameter-dependent quantum states:
//!
//! - **Pure states** ([`pure`]): the quantum geometric tensor
//!   `g_ij = <d_i psi|(1 - |psi><psi|)|d_j psi>`, its real part (the Fubini-Study
//!   metric) and negative imaginary part (the Berry curvature form
//!   `Omega_ij = -Im g_ij`), discrete Berry phases, and the split of the raw
//!   metric on the unit sphere into base and fiber contributions.
//! - **Mixed states** ([`mixed`]): Hilbert-Schmidt, Bures and Uhlmann metrics,
//!   the Uhlmann connection, holonomy and form, Uhlmann fidelity, and the
//!   Bures and Sjoqvist distances for full-rank density matrices.
//! - **Models** ([`zoo`]): the spin-1/2 paramagnet, a 2D two-band lattice
//!   model, and seeded random Hamiltonian fields, together with closed-form
//!   reference metrics.
//! - **Scans** ([`scan`]): declarative grid/sweep execution producing CSV or
//!   JSON tables, and an invariant-suite runner.
//!
//! Units follow `hbar = k_B = 1`. Derivatives with respect to parameters are
//! central finite differences (see [`linalg::DifferentiationPlan`]); all
//! state-valued fields are gauge fixed before differencing.
//!
//! Sign conventions: the imaginary part of the pure-state tensor is
//! `-Omega_ij`, and the Berry curvature two-form `F = dA` satisfies
//! `Omega = -(i/2) F`.

#![forbid(unsafe_code)]

pub mod error;
pub mod linalg;
pub mod mixed;
pub mod pure;
pub mod scan;
pub mod states;
pub mod tensor;
pub mod zoo;

pub use error::{Error, Result};
pub use linalg::{
    fd_derivative, matrix_function, matrix_sqrt, spectral_decompose, CMatrix, CVector,
    DifferentiationPlan, FdScheme, HermitianOperator, ParamPoint, SpectralDecomposition, C64,
};
pub use tensor::{MetricTensor, QGTensor, TwoForm};
pub use zoo::ParameterizedModel;
