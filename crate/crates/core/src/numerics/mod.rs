//! Numerical machinery that deliberately does *not* trust the closed forms:
//! quadrature of the kernel, a kernel-free finite-difference solver, sign
//! scanning over the unit square, and convergence-order measurement. These
//! are the oracles the analytic modules are tested against.

use core::fmt;

use crate::expr::EvalError;
use crate::kernel::SolvabilityError;

mod convergence;
mod empirical;
mod linsys;
mod quad;
mod solve;

pub use convergence::{convergence_study, ConvergenceEntry, ConvergenceReport};
pub use empirical::{empirical_classify, EmpiricalReport, EMPIRICAL_BASE_TOL};
pub use quad::QuadratureSpec;
pub use solve::{solve_fd, solve_green, SolveMethod, SolveReport, COND_LIMIT_PER_N3};

/// Failure modes of the solvers.
#[derive(Debug, Clone, PartialEq)]
pub enum SolveError {
    /// The boundary value problem itself has no unique solution.
    NotSolvable(SolvabilityError),
    /// The finite-difference system is too ill-conditioned to trust
    /// (expected near resonance on grids fine enough to resolve it).
    IllConditioned { estimate: f64 },
    /// The forcing expression failed to evaluate at a quadrature node.
    Sigma(EvalError),
    /// A grid or panel-count argument was out of range.
    InvalidGrid { what: &'static str },
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::NotSolvable(inner) => write!(f, "{inner}"),
            SolveError::IllConditioned { estimate } => write!(
                f,
                "discrete system is ill-conditioned (1-norm condition estimate {estimate:.3e})"
            ),
            SolveError::Sigma(inner) => write!(f, "sigma evaluation failed: {inner}"),
            SolveError::InvalidGrid { what } => write!(f, "invalid grid: {what}"),
        }
    }
}

impl core::error::Error for SolveError {
    fn source(&self) -> Option<&(dyn core::error::Error + 'static)> {
        match self {
            SolveError::NotSolvable(inner) => Some(inner),
            SolveError::Sigma(inner) => Some(inner),
            _ => None,
        }
    }
}

impl From<SolvabilityError> for SolveError {
    fn from(e: SolvabilityError) -> Self {
        SolveError::NotSolvable(e)
    }
}

impl From<EvalError> for SolveError {
    fn from(e: EvalError) -> Self {
        SolveError::Sigma(e)
    }
}
