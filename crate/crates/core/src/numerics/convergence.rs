//! Empirical convergence-order measurement for the two solvers.

use alloc::vec::Vec;

use crate::expr::SigmaFn;
use crate::kernel::ProblemParams;
use crate::math;

use super::quad::QuadratureSpec;
use super::solve::{solve_fd, solve_green, SolveMethod, SolveReport};
use super::SolveError;

/// One grid level of a study.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceEntry {
    /// Discretization parameter (panel count / interval count).
    pub n: usize,
    /// Max-norm error against the reference for this level.
    pub max_error: f64,
}

/// Result of [`convergence_study`].
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub method: SolveMethod,
    pub entries: Vec<ConvergenceEntry>,
    /// Least-squares slope of `ln(error)` against `ln(1/n)`. Levels with a
    /// zero error (notably the self-reference level) are excluded from the
    /// fit.
    pub fitted_order: f64,
}

/// Runs one solver over a ladder of grids and fits the observed order.
///
/// With `exact` provided, every level is compared against the true solution.
/// Without it, the finest level serves as the reference and each coarser `n`
/// must divide the finest so grids nest (the coarse solution is compared at
/// its own nodes, which are then also fine-grid nodes).
///
/// Requirements: at least three strictly increasing levels; for the
/// quadrature solver every `n` must be even (Simpson panel counts).
pub fn convergence_study(
    params: &ProblemParams,
    sigma: &SigmaFn,
    method: SolveMethod,
    n_list: &[usize],
    exact: Option<&dyn Fn(f64) -> f64>,
) -> Result<ConvergenceReport, SolveError> {
    if n_list.len() < 3 {
        return Err(SolveError::InvalidGrid {
            what: "a convergence study needs at least three grid levels",
        });
    }
    for pair in n_list.windows(2) {
        if pair[1] <= pair[0] {
            return Err(SolveError::InvalidGrid {
                what: "grid levels must be strictly increasing",
            });
        }
    }
    let finest = *n_list.last().unwrap();
    if exact.is_none() {
        for &n in n_list {
            if finest % n != 0 {
                return Err(SolveError::InvalidGrid {
                    what: "without an exact solution every level must divide the finest",
                });
            }
        }
    }
    if method == SolveMethod::GreenQuadrature {
        for &n in n_list {
            if n % 2 != 0 {
                return Err(SolveError::InvalidGrid {
                    what: "quadrature levels must be even panel counts",
                });
            }
        }
    }

    let run = |n: usize| -> Result<SolveReport, SolveError> {
        match method {
            SolveMethod::GreenQuadrature => {
                solve_green(params, sigma, QuadratureSpec::new(n, true), n + 1)
            }
            SolveMethod::FiniteDifference => solve_fd(params, sigma, n),
        }
    };

    let reference = match exact {
        Some(_) => None,
        None => Some(run(finest)?),
    };

    let mut entries = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let report = run(n)?;
        let err = match (exact, &reference) {
            (Some(f), _) => max_err_vs_fn(&report, f),
            (None, Some(fine)) => max_err_vs_nested(&report, fine, finest / n),
            (None, None) => unreachable!(),
        };
        entries.push(ConvergenceEntry { n, max_error: err });
    }

    let fitted_order = fit_order(&entries);
    Ok(ConvergenceReport {
        method,
        entries,
        fitted_order,
    })
}

fn max_err_vs_fn(report: &SolveReport, exact: &dyn Fn(f64) -> f64) -> f64 {
    let mut worst: f64 = 0.0;
    for (t, u) in report.grid.iter().zip(&report.u) {
        worst = f64::max(worst, math::abs(u - exact(*t)));
    }
    worst
}

fn max_err_vs_nested(coarse: &SolveReport, fine: &SolveReport, stride: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, u) in coarse.u.iter().enumerate() {
        worst = f64::max(worst, math::abs(u - fine.u[i * stride]));
    }
    worst
}

/// Least-squares slope of `ln(err)` over `ln(h)`, skipping non-positive
/// errors.
fn fit_order(entries: &[ConvergenceEntry]) -> f64 {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for e in entries {
        if e.max_error > 0.0 && e.max_error.is_finite() {
            xs.push(math::ln(1.0 / e.n as f64));
            ys.push(math::ln(e.max_error));
        }
    }
    let k = xs.len() as f64;
    if xs.len() < 2 {
        return f64::NAN;
    }
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    num / den
}
