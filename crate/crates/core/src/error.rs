use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by the zero quaternion")]
    ZeroDivision,
    #[error("non-finite value in input")]
    NonFinite,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("matrix does not commute with the quaternionic structure (residual {residual:.3e})")]
    NotJCommuting { residual: f64 },
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not nilpotent (residual {residual:.3e})")]
    NotNilpotent { residual: f64 },
    #[error("congruence system repeats the modulus root {0}")]
    DuplicateModulus(String),
    #[error("root finder did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("characteristic polynomial has imaginary residue {residue:.3e}")]
    NonRealCoefficients { residue: f64 },
    #[error("spectrum violates conjugate pairing or even multiplicity: {0}")]
    StructureViolation(String),
    #[error("{0} is not an eigenvalue")]
    NotAnEigenvalue(String),
    #[error("verification of {what} failed: residual {residual:.3e} exceeds {bound:.3e}")]
    VerificationFailed { what: &'static str, residual: f64, bound: f64 },
    #[error("instance generation failed: {0}")]
    GenerationFailed(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
