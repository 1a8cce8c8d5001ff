//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the toolkit. Diagnostic magnitudes are reported in
/// `f64` regardless of the scalar type in use.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error(
        "shift overflow: top coefficient magnitude {magnitude:.3e} exceeds the guard {guard:.3e}"
    )]
    ShiftOverflow { magnitude: f64, guard: f64 },

    #[error("evaluation point outside the closed unit disc: |z| = {modulus}")]
    OutsideDisc { modulus: f64 },

    #[error("evaluation too close to a Blaschke pole: |1 - conj(a) z| = {denominator:.3e}")]
    NearPole { denominator: f64 },

    #[error("Blaschke zero modulus {modulus} exceeds the cap {cap}")]
    ZeroModulusCap { modulus: f64, cap: f64 },

    #[error("Blaschke constant has modulus {modulus}, not unimodular within {tol:.1e}")]
    NonUnimodularConstant { modulus: f64, tol: f64 },

    #[error(
        "under-resolved run: tail budget {tail_tol:.3e} >= residual tolerance {residual_tol:.3e}; raise the ambient degree"
    )]
    UnderResolved { tail_tol: f64, residual_tol: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("guard violation: {0}")]
    GuardViolation(String),

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code the CLI maps this error to (schema errors are handled by the
    /// CLI layer itself).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::UnderResolved { .. } => 3,
            _ => 1,
        }
    }
}
