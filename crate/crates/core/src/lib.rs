//! Closed-form Green's function, sign-region classification, and numerical
//! oracles for the second-order problem
//!
//! ```text
//! u''(t) + M u(t) = sigma(t),        t in [0, 1],
//! u(0) - u(1)   = delta1 * I[u],
//! u'(0) - u'(1) = delta2 * I[u],     I[u] = integral of u over [0, 1],
//! ```
//!
//! a periodic problem perturbed by integral terms in both boundary
//! conditions. The crate provides:
//!
//! * [`kernel`] — the exact kernel `G(t, s)`, its `t`-derivatives, and the
//!   solvability guard (the problem degenerates at `M = 4 k^2 pi^2` and on
//!   the line `delta2 = M`);
//! * [`regions`] — the classification of `(M, delta1, delta2)` space into
//!   regions where `G` has one sign, with the frontier curves in closed
//!   form;
//! * [`numerics`] — solvers and scanners that do not trust the closed
//!   forms: kernel quadrature, a kernel-free finite-difference solver,
//!   empirical sign classification, and convergence studies;
//! * [`expr`] — a small expression language for forcing terms `sigma(t)`.
//!
//! The crate is `no_std` (with `alloc`): all scalar math routes through
//! `libm`, so results are bit-identical across platforms.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod math;

pub mod expr;
pub mod kernel;
pub mod numerics;
pub mod regions;

pub use expr::{parse_sigma, EvalError, ParseError, SigmaFn};
pub use kernel::{ProblemParams, Regime, Side, SolvabilityError, PI_SQUARED};
pub use numerics::{
    convergence_study, empirical_classify, solve_fd, solve_green, ConvergenceReport,
    EmpiricalReport, QuadratureSpec, SolveError, SolveMethod, SolveReport,
};
pub use regions::{classify, ClassifyReport, FrontierDistances, RegionError, SignClass};
