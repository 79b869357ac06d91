//! Two independent solvers for the boundary value problem: one that
//! integrates the closed-form kernel against `sigma`, and one that never
//! sees the kernel at all (a dense finite-difference discretization).
//! Their agreement is the main cross-check on the closed forms.

use alloc::vec;
use alloc::vec::Vec;

use crate::expr::SigmaFn;
use crate::kernel::{ProblemParams, Side};
use crate::math;

use super::linsys::{lu_factor, norm1};
use super::quad::{integrate_unit, simpson, QuadratureSpec};
use super::SolveError;

/// Which solver produced a [`SolveReport`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    /// `u(t) = integral of G(t, s) sigma(s) ds` by kink-split Simpson.
    GreenQuadrature,
    /// Dense second-order finite differences with trapezoid boundary rows.
    FiniteDifference,
}

impl SolveMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            SolveMethod::GreenQuadrature => "green",
            SolveMethod::FiniteDifference => "fd",
        }
    }
}

/// Solution samples plus self-diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub method: SolveMethod,
    /// Uniform output grid on `[0, 1]`, endpoints included.
    pub grid: Vec<f64>,
    /// Solution samples `u(grid[i])`.
    pub u: Vec<f64>,
    /// Residuals of the two boundary conditions. For the quadrature solver
    /// these are genuine defects of the computed solution; for the
    /// finite-difference solver they restate the solved discrete rows and so
    /// mostly measure the linear algebra.
    pub bc_residuals: [f64; 2],
    /// Max over interior grid points of the centered-difference defect
    /// `|D2 u + M u - sigma|`.
    pub ode_residual_max: f64,
    /// 1-norm condition estimate of the discrete system (finite differences
    /// only).
    pub condition_estimate: Option<f64>,
}

/// The finite-difference system is reported ill-conditioned when the
/// estimated 1-norm condition number exceeds `COND_LIMIT_PER_N3 * n^3`.
///
/// Scale rationale: interior rows carry `1/h^2 = n^2`, so `norm1(A) ~ 4n^2`;
/// a unit impulse in a boundary row produces an `O(1)` solution profile
/// whose entries sum to `O(n)`, so `norm1(inverse(A))` grows like `n` even
/// for well-posed problems. Healthy parameter triples therefore measure at
/// roughly `4n^3` to `10n^3` (tighter margins to the resonant set raise the
/// constant, e.g. a `0.05` gap in `delta2 - M` measures near `80n^3`), while
/// resonant coefficients grow two powers of `n` faster once the grid
/// resolves the resonant mode: `M = 4 pi^2` measures `250n^3` at `n = 32`
/// and `16_000n^3` at `n = 256`. The multiplier `200` sits well above every
/// measured healthy profile and is crossed by the resonant ones on every
/// grid from `n = 32` up.
pub const COND_LIMIT_PER_N3: f64 = 200.0;

/// Solves by integrating the closed-form kernel: `u(t_i) = integral of
/// G(t_i, s) sigma(s) ds` on a uniform grid of `n_out` points.
///
/// Boundary residuals are formed from the same quadrature: `I[u]` by Simpson
/// over fresh evaluations of `u`, and `u'(0)`, `u'(1)` by integrating the
/// one-sided kernel derivative against `sigma`.
pub fn solve_green(
    params: &ProblemParams,
    sigma: &SigmaFn,
    quad: QuadratureSpec,
    n_out: usize,
) -> Result<SolveReport, SolveError> {
    params.solvability()?;
    quad.validate()?;
    if n_out < 2 {
        return Err(SolveError::InvalidGrid {
            what: "n_out must be at least 2",
        });
    }

    let last = (n_out - 1) as f64;
    let grid: Vec<f64> = (0..n_out).map(|i| i as f64 / last).collect();

    let u_at = |x: f64| -> Result<f64, SolveError> {
        let kink = if quad.split_at_kink { Some(x) } else { None };
        integrate_unit(
            &mut |s| -> Result<f64, SolveError> {
                Ok(params.green(x, s)? * sigma.eval(s)?)
            },
            kink,
            quad.panels,
        )
    };

    let u: Vec<f64> = grid.iter().map(|&x| u_at(x)).collect::<Result<_, _>>()?;

    let int_u = simpson(&mut |x| u_at(x), 0.0, 1.0, quad.panels)?;
    // u'(0) and u'(1): no interior kink (it sits at the boundary), and the
    // side picks the branch valid inside the square
    let du0 = integrate_unit(
        &mut |s| -> Result<f64, SolveError> {
            Ok(params.green_dt(0.0, s, Side::Left)? * sigma.eval(s)?)
        },
        None,
        quad.panels,
    )?;
    let du1 = integrate_unit(
        &mut |s| -> Result<f64, SolveError> {
            Ok(params.green_dt(1.0, s, Side::Right)? * sigma.eval(s)?)
        },
        None,
        quad.panels,
    )?;

    let bc_residuals = [
        u[0] - u[n_out - 1] - params.delta1 * int_u,
        du0 - du1 - params.delta2 * int_u,
    ];
    let ode_residual_max = ode_defect(params, sigma, &grid, &u)?;

    Ok(SolveReport {
        method: SolveMethod::GreenQuadrature,
        grid,
        u,
        bc_residuals,
        ode_residual_max,
        condition_estimate: None,
    })
}

/// Solves without the kernel: centered second differences on `n + 1` nodes,
/// trapezoid rule for `I[u]`, and second-order one-sided stencils for the
/// endpoint slopes. Requires `4 <= n <= 1024`: the two integral boundary
/// rows are dense, so the system is solved by dense LU, which is the right
/// tool only at desk scale.
///
/// Deliberately performs no analytic resonance pre-check: as an independent
/// oracle it must discover resonance from the numbers. Resonant (or
/// near-resonant) parameters surface as an [`SolveError::IllConditioned`]
/// system once the grid is fine enough to resolve the resonant mode; on a
/// coarse grid the discrete system is genuinely invertible and solves to its
/// discretization accuracy.
pub fn solve_fd(
    params: &ProblemParams,
    sigma: &SigmaFn,
    n: usize,
) -> Result<SolveReport, SolveError> {
    if n < 4 {
        return Err(SolveError::InvalidGrid {
            what: "n must be at least 4",
        });
    }
    if n > 1024 {
        return Err(SolveError::InvalidGrid {
            what: "n must be at most 1024 (dense solver)",
        });
    }
    let np = n + 1;
    let nf = n as f64;
    let h = 1.0 / nf;
    let inv_h2 = nf * nf;
    let grid: Vec<f64> = (0..np).map(|i| i as f64 / nf).collect();

    let mut a = vec![0.0; np * np];
    let mut rhs = vec![0.0; np];
    for i in 1..n {
        a[i * np + i - 1] = inv_h2;
        a[i * np + i] = -2.0 * inv_h2 + params.m;
        a[i * np + i + 1] = inv_h2;
        rhs[i] = sigma.eval(grid[i])?;
    }
    let trap = |j: usize| h * if j == 0 || j == n { 0.5 } else { 1.0 };
    // row 0: u(0) - u(1) - delta1 I[u] = 0
    a[0] += 1.0;
    a[n] -= 1.0;
    for j in 0..np {
        a[j] -= params.delta1 * trap(j);
    }
    // row n: u'(0) - u'(1) - delta2 I[u] = 0 with 3-point one-sided slopes
    let c = 0.5 * nf; // 1 / (2h)
    a[n * np] += -3.0 * c;
    a[n * np + 1] += 4.0 * c;
    a[n * np + 2] += -c;
    a[n * np + n] += -3.0 * c;
    a[n * np + n - 1] += 4.0 * c;
    a[n * np + n - 2] += -c;
    for j in 0..np {
        a[n * np + j] -= params.delta2 * trap(j);
    }

    let a_norm1 = norm1(&a, np);
    let lu = lu_factor(a, np).map_err(|_| SolveError::IllConditioned {
        estimate: f64::INFINITY,
    })?;
    let estimate = a_norm1 * lu.inverse_norm1_estimate();
    if estimate > COND_LIMIT_PER_N3 * nf * nf * nf {
        return Err(SolveError::IllConditioned { estimate });
    }

    let mut u = rhs;
    lu.solve(&mut u);

    // restate the solved rows as residuals (diagnoses the linear solve)
    let int_u: f64 = (0..np).map(|j| trap(j) * u[j]).sum();
    let du0 = c * (-3.0 * u[0] + 4.0 * u[1] - u[2]);
    let du1 = c * (3.0 * u[n] - 4.0 * u[n - 1] + u[n - 2]);
    let bc_residuals = [
        u[0] - u[n] - params.delta1 * int_u,
        du0 - du1 - params.delta2 * int_u,
    ];
    let ode_residual_max = ode_defect(params, sigma, &grid, &u)?;

    Ok(SolveReport {
        method: SolveMethod::FiniteDifference,
        grid,
        u,
        bc_residuals,
        ode_residual_max,
        condition_estimate: Some(estimate),
    })
}

/// Max interior defect of the centered second difference against
/// `sigma - M u`.
fn ode_defect(
    params: &ProblemParams,
    sigma: &SigmaFn,
    grid: &[f64],
    u: &[f64],
) -> Result<f64, SolveError> {
    let n = grid.len();
    if n < 3 {
        return Ok(0.0);
    }
    let h = grid[1] - grid[0];
    let inv_h2 = 1.0 / (h * h);
    let mut worst: f64 = 0.0;
    for i in 1..n - 1 {
        let d2 = (u[i - 1] - 2.0 * u[i] + u[i + 1]) * inv_h2;
        let defect = d2 + params.m * u[i] - sigma.eval(grid[i])?;
        worst = f64::max(worst, math::abs(defect));
    }
    Ok(worst)
}
