//! Closed-form Green's function of the perturbed periodic problem
//!
//! ```text
//!     u''(t) + M u(t) = sigma(t),        t in [0, 1],
//!     u(0)  - u(1)  = delta1 * I[u],     I[u] = integral of u over [0, 1],
//!     u'(0) - u'(1) = delta2 * I[u],
//! ```
//!
//! Whenever the problem is uniquely solvable its solution is
//! `u(t) = integral of G(t, s) * sigma(s) ds` with the kernel
//! `G = G_{M,delta1,delta2}` evaluated here exactly, in all three coefficient
//! regimes `M > 0`, `M < 0` and `M = 0`.
//!
//! Unique solvability fails exactly on the periodic spectrum
//! `M = 4 k^2 pi^2` (`k >= 1`) and on the line `delta2 = M`; for `M = 0` the
//! latter is the classical periodic resonance `delta2 = 0`. Every evaluation
//! entry point checks this first and refuses with [`SolvabilityError`].
//!
//! For `M != 0` the kernel splits as
//!
//! ```text
//!     G_{M,d1,d2}(t, s) = G_{M,0,0}(t, s)
//!                       + (d1 * w1(t) + d2 * w2(t)) / (M - d2)
//! ```
//!
//! where `G_{M,0,0}` is the purely periodic kernel ([`base_kernel`]),
//! `w2(t) = G_{M,0,0}(t, 0)` ([`omega2`]) and `w1 = w2'` ([`omega1`]). The
//! `M = 0` regime is not a limit of that formula; it has its own piecewise
//! quadratic kernel, evaluated directly.

use core::fmt;

use crate::math;

/// `pi^2`, the supremum of the coefficient range covered by the sign theory.
pub const PI_SQUARED: f64 = core::f64::consts::PI * core::f64::consts::PI;

/// Half-width of the rejection band around each periodic eigenvalue
/// `4 k^2 pi^2`: closer than this counts as resonant.
pub const EIGENVALUE_GUARD: f64 = 1e-9;

/// Half-width of the rejection band around the resonance line `delta2 = M`.
pub const DELTA2_GUARD: f64 = 1e-12;

/// Coefficient regime of `M`; the kernel has a distinct closed form in each.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `M > 0`: trigonometric kernel.
    Positive,
    /// `M < 0`: hyperbolic kernel.
    Negative,
    /// `M = 0` exactly: piecewise quadratic kernel (requires `delta2 != 0`).
    Zero,
}

/// Which closed-form branch of the piecewise kernel applies at `(t, s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `s <= t` (the branch containing the outgoing slope at `t = s`).
    Lower,
    /// `t < s`.
    Upper,
}

/// One-sided limit selector for the `t`-derivative, which jumps across
/// `t = s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Limit from `t < s` uses the upper branch at the kink.
    Left,
    /// Limit from `t > s` uses the lower branch at the kink.
    Right,
}

/// The problem is not uniquely solvable for these parameters, so no Green's
/// function exists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolvabilityError {
    /// `M` lies within [`EIGENVALUE_GUARD`] of the periodic eigenvalue
    /// `4 k^2 pi^2` named by `k`.
    PeriodicEigenvalue { m: f64, k: u32 },
    /// `delta2` lies within [`DELTA2_GUARD`] of `M` (for `M = 0` this is the
    /// resonant case `delta2 = 0`).
    DeltaTwoEqualsM { m: f64, delta2: f64 },
}

impl fmt::Display for SolvabilityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SolvabilityError::PeriodicEigenvalue { m, k } => {
                let lambda = 4.0 * (k as f64) * (k as f64) * PI_SQUARED;
                write!(
                    f,
                    "M = {m} is resonant: nearest periodic eigenvalue is \
                     4*{k}^2*pi^2 = {lambda}"
                )
            }
            SolvabilityError::DeltaTwoEqualsM { m, delta2 } => {
                if m == 0.0 {
                    write!(
                        f,
                        "delta2 equals M: delta2 = 0 with M = 0 is the \
                         resonant periodic problem"
                    )
                } else {
                    write!(
                        f,
                        "delta2 equals M (delta2 = {delta2}, M = {m}): the \
                         problem is not uniquely solvable"
                    )
                }
            }
        }
    }
}

impl core::error::Error for SolvabilityError {}

/// Parameter triple `(M, delta1, delta2)` of the boundary value problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemParams {
    /// Coefficient of `u` in `u'' + M u = sigma`.
    pub m: f64,
    /// Weight of `I[u]` in the value condition `u(0) - u(1) = delta1 * I[u]`.
    pub delta1: f64,
    /// Weight of `I[u]` in the slope condition `u'(0) - u'(1) = delta2 * I[u]`.
    pub delta2: f64,
}

impl ProblemParams {
    pub const fn new(m: f64, delta1: f64, delta2: f64) -> Self {
        Self { m, delta1, delta2 }
    }

    /// Closed-form regime selected by the sign of `M` (exact on `M = 0`).
    pub fn regime(&self) -> Regime {
        if self.m > 0.0 {
            Regime::Positive
        } else if self.m < 0.0 {
            Regime::Negative
        } else {
            Regime::Zero
        }
    }

    /// Checks both resonance conditions; `Err` means no kernel exists.
    pub fn solvability(&self) -> Result<(), SolvabilityError> {
        check_resonance(self.m, self.delta2)
    }

    pub fn is_solvable(&self) -> bool {
        self.solvability().is_ok()
    }

    /// Branch of the piecewise kernel at `(t, s)`; ties at `t = s` go to
    /// [`Branch::Lower`].
    pub fn branch_at(t: f64, s: f64) -> Branch {
        if s <= t {
            Branch::Lower
        } else {
            Branch::Upper
        }
    }

    /// Kernel value `G_{M,delta1,delta2}(t, s)` for `t, s` in `[0, 1]`.
    pub fn green(&self, t: f64, s: f64) -> Result<f64, SolvabilityError> {
        self.solvability()?;
        debug_assert!((0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&s));
        Ok(match self.regime() {
            Regime::Zero => self.green_zero(t, s),
            _ => {
                base_raw(self.m, t, s)
                    + (self.delta1 * omega1_raw(self.m, t)
                        + self.delta2 * omega2_raw(self.m, t))
                        / (self.m - self.delta2)
            }
        })
    }

    /// One-sided `t`-derivative of the kernel. The two sides differ only at
    /// the kink `t = s`, where the jump
    /// `green_dt(s, s, Right) - green_dt(s, s, Left)` equals `1` up to one
    /// final rounding on each side (the periodic part contributes exactly
    /// `+-1/2`, the smooth part is common to both).
    pub fn green_dt(&self, t: f64, s: f64, side: Side) -> Result<f64, SolvabilityError> {
        self.solvability()?;
        debug_assert!((0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&s));
        let lower = t > s || (t == s && side == Side::Right);
        Ok(match self.regime() {
            Regime::Zero => {
                // d/dt of the piecewise quadratic: slopes differ by 1 across
                // the kink.
                let base = self.delta1 / self.delta2 + s;
                if lower {
                    base
                } else {
                    base - 1.0
                }
            }
            _ => {
                // The periodic part is a function of |t - s| whose derivative
                // is +-w1(|t - s|); w2' = w1 and w1' = -M * w2.
                let d = math::abs(t - s);
                let base = if lower {
                    omega1_raw(self.m, d)
                } else {
                    -omega1_raw(self.m, d)
                };
                base + (-self.m * self.delta1 * omega2_raw(self.m, t)
                    + self.delta2 * omega1_raw(self.m, t))
                    / (self.m - self.delta2)
            }
        })
    }

    /// Closed-form second `t`-derivative away from the kink (at `t = s` the
    /// lower branch is differentiated). Satisfies `G_tt + M G = 0` for
    /// `t != s`.
    pub fn green_dtt(&self, t: f64, s: f64) -> Result<f64, SolvabilityError> {
        self.solvability()?;
        debug_assert!((0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&s));
        Ok(match self.regime() {
            // Piecewise linear in t once differentiated: second derivative 0.
            Regime::Zero => 0.0,
            _ => {
                let d = math::abs(t - s);
                let w = math::sqrt(math::abs(self.m));
                let base = if self.m > 0.0 {
                    // d^2/dt^2 of cos(w(1/2 - d)) / (2w sin(w/2))
                    -w * math::cos(w * (0.5 - d)) / (2.0 * math::sin(0.5 * w))
                } else {
                    // d^2/dt^2 of (e^{-wd} + e^{-w(1-d)}) / (2w expm1(-w))
                    w * (math::exp(-w * d) + math::exp(-w * (1.0 - d)))
                        / (2.0 * math::expm1(-w))
                };
                base + (-self.m)
                    * (self.delta1 * omega1_raw(self.m, t)
                        + self.delta2 * omega2_raw(self.m, t))
                    / (self.m - self.delta2)
            }
        })
    }

    /// `M = 0` kernel: piecewise quadratic in `(t, s)`, linear in `t` on each
    /// branch.
    fn green_zero(&self, t: f64, s: f64) -> f64 {
        let (d1, d2) = (self.delta1, self.delta2);
        let common = -2.0 + d1 * (2.0 * t - 1.0);
        if s <= t {
            (common - s * d2 * (1.0 + s - 2.0 * t)) / (2.0 * d2)
        } else {
            (common - d2 * (s - 1.0) * (s - 2.0 * t)) / (2.0 * d2)
        }
    }
}

/// Resonance test shared by every evaluation entry point.
pub(crate) fn check_resonance(m: f64, delta2: f64) -> Result<(), SolvabilityError> {
    if m > 0.0 {
        let k = math::round(math::sqrt(m) / (2.0 * core::f64::consts::PI));
        if k >= 1.0 {
            let k = k as u32;
            let lambda = 4.0 * (k as f64) * (k as f64) * PI_SQUARED;
            if math::abs(m - lambda) < EIGENVALUE_GUARD {
                return Err(SolvabilityError::PeriodicEigenvalue { m, k });
            }
        }
    }
    if math::abs(delta2 - m) < DELTA2_GUARD {
        return Err(SolvabilityError::DeltaTwoEqualsM { m, delta2 });
    }
    Ok(())
}

/// Periodic kernel `G_{M,0,0}(t, s)` (no boundary perturbation). Defined for
/// non-resonant `M != 0`; as a function of `(t, s)` it depends only on
/// `|t - s|` and is symmetric.
pub fn base_kernel(m: f64, t: f64, s: f64) -> Result<f64, SolvabilityError> {
    check_resonance(m, 0.0)?;
    debug_assert!((0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&s));
    Ok(base_raw(m, t, s))
}

/// `w2(t) = G_{M,0,0}(t, 0)`: solution of the homogeneous problem driven by a
/// unit impulse at the endpoint. `integral of w2 = 1/M`.
pub fn omega2(m: f64, t: f64) -> Result<f64, SolvabilityError> {
    check_resonance(m, 0.0)?;
    debug_assert!((0.0..=1.0).contains(&t));
    Ok(omega2_raw(m, t))
}

/// `w1 = w2'`. Takes the exact values `w1(0) = 1/2` and `w1(1) = -1/2`, and
/// `integral of w1 = 0`.
pub fn omega1(m: f64, t: f64) -> Result<f64, SolvabilityError> {
    check_resonance(m, 0.0)?;
    debug_assert!((0.0..=1.0).contains(&t));
    Ok(omega1_raw(m, t))
}

/// `G_{M,0,0}` as a function of `d = |t - s|`, no resonance check.
///
/// `M < 0` uses the rescaled form with all exponents `<= 0`, which is stable
/// for large `|M|` and, via `expm1`, also as `M -> 0-`.
fn base_raw(m: f64, t: f64, s: f64) -> f64 {
    let d = math::abs(t - s);
    let w = math::sqrt(math::abs(m));
    if m > 0.0 {
        math::cos(w * (0.5 - d)) / (2.0 * w * math::sin(0.5 * w))
    } else {
        (math::exp(-w * d) + math::exp(-w * (1.0 - d))) / (2.0 * w * math::expm1(-w))
    }
}

fn omega2_raw(m: f64, t: f64) -> f64 {
    let w = math::sqrt(math::abs(m));
    if m > 0.0 {
        math::cos(w * (t - 0.5)) / (2.0 * w * math::sin(0.5 * w))
    } else {
        (math::exp(-w * t) + math::exp(-w * (1.0 - t))) / (2.0 * w * math::expm1(-w))
    }
}

fn omega1_raw(m: f64, t: f64) -> f64 {
    let w = math::sqrt(math::abs(m));
    if m > 0.0 {
        math::sin(w * (0.5 - t)) / (2.0 * math::sin(0.5 * w))
    } else {
        // sinh(w(1/2 - t)) / (2 sinh(w/2)) with exponents kept <= 0, written
        // as a difference of expm1 terms: the constant 1's cancel exactly, so
        // at the endpoints numerator and denominator coincide bitwise (value
        // exactly +-1/2 for every w) and small w loses no precision.
        (math::expm1(-w * t) - math::expm1(-w * (1.0 - t))) / (-2.0 * math::expm1(-w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resonance_guard_hits_eigenvalues() {
        let four_pi2 = 4.0 * PI_SQUARED;
        match check_resonance(four_pi2, 1.0) {
            Err(SolvabilityError::PeriodicEigenvalue { k, .. }) => assert_eq!(k, 1),
            other => panic!("expected eigenvalue resonance, got {other:?}"),
        }
        // k = 2 eigenvalue, slightly perturbed but inside the guard
        match check_resonance(16.0 * PI_SQUARED + 1e-10, 0.0) {
            Err(SolvabilityError::PeriodicEigenvalue { k, .. }) => assert_eq!(k, 2),
            other => panic!("expected eigenvalue resonance, got {other:?}"),
        }
        // just outside the guard: fine
        assert!(check_resonance(four_pi2 + 1e-6, 0.0).is_ok());
        // pi^2 itself is not an eigenvalue
        assert!(check_resonance(PI_SQUARED, 0.0).is_ok());
    }

    #[test]
    fn resonance_guard_hits_delta2_line() {
        assert!(matches!(
            check_resonance(2.5, 2.5),
            Err(SolvabilityError::DeltaTwoEqualsM { .. })
        ));
        assert!(matches!(
            check_resonance(0.0, 0.0),
            Err(SolvabilityError::DeltaTwoEqualsM { .. })
        ));
        assert!(matches!(
            check_resonance(1.0, 1.0 + 1e-13),
            Err(SolvabilityError::DeltaTwoEqualsM { .. })
        ));
        assert!(check_resonance(1.0, 1.0 + 1e-11).is_ok());
    }

    #[test]
    fn omega1_endpoint_values_are_exact() {
        for m in [1.0, 4.0, 9.0, 0.25, -1.0, -4.0, -25.0, 1e-6, -1e-6] {
            assert_eq!(omega1(m, 0.0).unwrap(), 0.5, "m = {m}");
            assert_eq!(omega1(m, 1.0).unwrap(), -0.5, "m = {m}");
        }
    }

    #[test]
    fn jump_at_the_kink_is_one_to_rounding() {
        // the +-1/2 halves are exact; the shared smooth part costs at most
        // one rounding per side, so the jump sits within 2 ulp of 1
        for params in [
            ProblemParams::new(1.0, 0.3, -0.2),
            ProblemParams::new(-4.0, 1.0, 2.0),
            ProblemParams::new(0.0, 1.0, 4.0),
            ProblemParams::new(-1.0, 0.7, 0.4),
        ] {
            for s in [0.1, 0.37, 0.5, 0.61, 0.93] {
                let right = params.green_dt(s, s, Side::Right).unwrap();
                let left = params.green_dt(s, s, Side::Left).unwrap();
                let scale = 1.0 + left.abs().max(right.abs());
                assert!(
                    (right - left - 1.0).abs() <= 2.0 * f64::EPSILON * scale,
                    "params = {params:?}, s = {s}, jump = {}",
                    right - left
                );
            }
        }
    }

    #[test]
    fn branch_tie_goes_lower() {
        assert_eq!(ProblemParams::branch_at(0.5, 0.5), Branch::Lower);
        assert_eq!(ProblemParams::branch_at(0.4, 0.5), Branch::Upper);
        assert_eq!(ProblemParams::branch_at(0.6, 0.5), Branch::Lower);
    }
}
