use thiserror::Error;

/// Errors raised by the matrix, network, and optimization layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: asymmetry {asymmetry:.3e} exceeds tolerance {tolerance:.3e}")]
    NotHermitian { asymmetry: f64, tolerance: f64 },

    #[error("matrix is not positive definite: minimum eigenvalue {min_eigenvalue:.6e}")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("zero vector has no singular frame")]
    ZeroVector,

    #[error("index range {start}..={end} out of bounds for dimension {dim}")]
    OutOfRange { start: usize, end: usize, dim: usize },

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("{n_x} columns do not divide {n_antennas} antennas")]
    BadGrid { n_antennas: usize, n_x: usize },

    #[error("mutual impedance requested for antenna {0} with itself")]
    SameAntenna(usize),

    #[error("coupling kernel is singular between antennas {p} and {q}")]
    SingularKernel { p: usize, q: usize },

    #[error("real part of coupling matrix is not positive definite (minimum eigenvalue {min_eigenvalue:.6e} Ohm)")]
    RealPartNotPD { min_eigenvalue: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("{what} is required for this operation but the scenario is {actual}")]
    WrongArchitecture { what: &'static str, actual: &'static str },

    #[error("coupling matrix is singular (rcond {rcond:.3e})")]
    SingularCoupling { rcond: f64 },

    #[error("network system matrix is singular (rcond {rcond:.3e})")]
    SingularSystem { rcond: f64 },

    #[error("matching-network impedance block is singular (rcond {rcond:.3e})")]
    SingularBlock { rcond: f64 },

    #[error("I + Theta stayed singular after {attempts} phase rotations")]
    ThetaPlusIdentitySingular { attempts: usize },

    #[error("achieved power {achieved:.12e} W does not meet the closed-form bound {bound:.12e} W")]
    BoundMismatch { achieved: f64, bound: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
