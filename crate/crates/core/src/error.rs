//! Error type shared by every module of the crate.

use alloc::string::String;
use core::fmt;

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes of the toolkit.
///
/// The variants map one-to-one onto the process exit codes used by the
/// command-line front end: configuration problems, solver failures, the
/// criticality gate and descent stalls are kept distinct.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A periodic grid was empty, odd-sized or too short.
    InvalidGrid(String),
    /// A profile left the admissible band `0 < h < R0` (or degenerated).
    GeometryViolation(String),
    /// The Gram matrix of a generalized eigenproblem was not positive definite.
    IndefiniteGram(String),
    /// A root bracket had no sign change.
    Bracket(String),
    /// A linear solve did not converge or hit a singular operator.
    ///
    /// `condition` is a cheap estimate of the conditioning at the point of
    /// failure (pivot-ratio based for direct solves, residual-based for
    /// iterative ones).
    SolverFailure { message: String, condition: f64 },
    /// Second-variation machinery was invoked on a pair that fails the
    /// criticality gate. Carries the measured deviation and the gate value.
    NotCritical { deviation: f64, threshold: f64 },
    /// The penalized descent line search could not make progress.
    StalledDescent {
        iteration: usize,
        step: f64,
        grad_norm: f64,
        objective: f64,
    },
    /// An argument was outside its documented domain.
    Domain(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidGrid(m) => write!(f, "invalid grid: {m}"),
            Error::GeometryViolation(m) => write!(f, "geometry violation: {m}"),
            Error::IndefiniteGram(m) => write!(f, "indefinite gram matrix: {m}"),
            Error::Bracket(m) => write!(f, "bracket error: {m}"),
            Error::SolverFailure { message, condition } => {
                write!(f, "solver failure: {message} (condition estimate {condition:.3e})")
            }
            Error::NotCritical { deviation, threshold } => write!(
                f,
                "pair is not critical: criticality deviation {deviation:.6e} exceeds gate {threshold:.6e}"
            ),
            Error::StalledDescent {
                iteration,
                step,
                grad_norm,
                objective,
            } => write!(
                f,
                "descent stalled at iteration {iteration}: step {step:.3e}, \
                 projected gradient {grad_norm:.3e}, objective {objective:.12e}"
            ),
            Error::Domain(m) => write!(f, "domain error: {m}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
