//! Grid-based sign scanning of the kernel. This is the semantic oracle for
//! the region classification: it looks at actual kernel values and reports
//! the sign pattern it sees, with no knowledge of the frontier formulas.

use crate::kernel::{ProblemParams, SolvabilityError};
use crate::math;
use crate::regions::SignClass;

/// Default relative scale for the sign tolerance: values within
/// `EMPIRICAL_BASE_TOL * (1 + max |G|)` of zero are treated as "zero" when
/// deciding the sign pattern.
pub const EMPIRICAL_BASE_TOL: f64 = 1e-10;

/// Half-width of the refined bands along the edges of the square and around
/// the diagonal, as a fraction of the unit interval. The kernel attains its
/// boundary extrema on these sets, so they get a 4x finer sampling step.
const REFINE_BAND: f64 = 0.05;

/// What the scan saw.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalReport {
    /// One of `StrictlyPositive`, `StrictlyNegative`, `SignChanging`, or
    /// `OnFrontier` (the last meaning: one sign up to the tolerance, but
    /// values of the dominant sign come within tolerance of zero).
    pub class: SignClass,
    /// Smallest kernel value seen.
    pub min: f64,
    /// Largest kernel value seen.
    pub max: f64,
    /// Tolerance actually used for the sign decision.
    pub tol: f64,
    /// Number of `(t, s)` samples evaluated.
    pub samples: usize,
}

/// Scans `G` over `[0, 1]^2` and reports the observed sign pattern.
///
/// Sampling: a uniform `grid_n x grid_n` tensor grid, plus 4x-refined bands
/// along `t` near `0` and `1` (full `s` range) and around the diagonal
/// `|t - s| <= 0.05`, where the extremal values live.
///
/// `tol` overrides the default `EMPIRICAL_BASE_TOL * (1 + max |G|)`
/// threshold separating "genuinely signed" from "numerically zero".
pub fn empirical_classify(
    params: &ProblemParams,
    grid_n: usize,
    tol: Option<f64>,
) -> Result<EmpiricalReport, SolvabilityError> {
    params.solvability()?;
    let n = grid_n.max(3);
    let steps = (n - 1) as f64;

    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    let mut samples = 0usize;
    let mut look = |t: f64, s: f64| {
        // solvability was checked once up front
        let g = params.green(t, s).unwrap_or(f64::NAN);
        if g < min {
            min = g;
        }
        if g > max {
            max = g;
        }
        samples += 1;
    };

    // base tensor grid
    for i in 0..n {
        let t = i as f64 / steps;
        for j in 0..n {
            look(t, j as f64 / steps);
        }
    }

    // refined bands: 4x finer step in both directions
    let fine = 4 * (n - 1);
    let finef = fine as f64;
    let band = ((REFINE_BAND * finef) as usize).max(1);

    // edge slabs t in [0, 0.05] and [0.95, 1], full s range
    for i in 0..=band {
        let t_lo = i as f64 / finef;
        let t_hi = (fine - i) as f64 / finef;
        for j in 0..=fine {
            let s = j as f64 / finef;
            look(t_lo, s);
            look(t_hi, s);
        }
    }

    // diagonal band |t - s| <= 0.05
    for i in 0..=fine {
        let t = i as f64 / finef;
        let j_lo = i.saturating_sub(band);
        let j_hi = (i + band).min(fine);
        for j in j_lo..=j_hi {
            look(t, j as f64 / finef);
        }
    }

    let scale = 1.0 + f64::max(math::abs(min), math::abs(max));
    let tol = tol.unwrap_or(EMPIRICAL_BASE_TOL * scale);

    let class = if min > tol {
        SignClass::StrictlyPositive
    } else if max < -tol {
        SignClass::StrictlyNegative
    } else if min < -tol && max > tol {
        SignClass::SignChanging
    } else {
        // single-signed up to tolerance, but grazing zero
        SignClass::OnFrontier
    };

    Ok(EmpiricalReport {
        class,
        min,
        max,
        tol,
        samples,
    })
}
