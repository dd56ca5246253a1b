//! Linear algebra over the quaternions: similarity classes, the complex
//! adjoint, characteristic polynomials, Jordan canonical form, additive and
//! multiplicative Jordan–Chevalley decompositions and the exponential map.

pub mod check;
pub mod cmat;
pub mod error;
pub mod expmap;
pub mod generate;
pub mod hmat;
pub mod io;
pub mod jcd;
pub mod jordan;
pub mod poly;
pub mod quat;
pub mod schur;
pub mod spectral;

pub use cmat::CMatrix;
pub use error::{Error, Result};
pub use expmap::{exp_jcd_relation, hexp, hlog, ExpJcdReport};
pub use generate::{generate, GeneratedInstance};
pub use hmat::{AdjointMatrix, HMatrix, HVector};
pub use jcd::{additive_jcd, is_semisimple, multiplicative_jcd, AdditiveJcd, MultiplicativeJcd};
pub use jordan::{jordan_form, spec_equivalent, JordanBlock, JordanResult, JordanSpec, PairedChain};
pub use poly::{crt_solve, realify, ComplexPoly, Congruence, CongruenceSystem, RealPoly};
pub use quat::{is_similar, Quaternion};
pub use spectral::{char_poly, generalized_eigenspace, spectrum, EigenKind, SpectralEntry, Spectrum};

/// Numerical thresholds shared by every routine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative threshold for numerical rank decisions.
    pub rank: f64,
    /// Distance below which two eigenvalues are considered equal.
    pub eig: f64,
    /// Relative bound for verification residuals.
    pub residual: f64,
    /// Minimum radius when grouping polynomial roots into clusters.
    pub cluster: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { rank: 1e-9, eig: 1e-6, residual: 1e-6, cluster: 1e-6 }
    }
}
