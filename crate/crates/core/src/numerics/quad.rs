//! Composite Simpson quadrature, with optional subdivision at one interior
//! kink.
//!
//! The solution integrand `s -> G(t, s) sigma(s)` is smooth on each side of
//! `s = t` but only continuous across it. Splitting the panel layout there
//! restores the full high-order behaviour of Simpson's rule; integrating
//! straight across the kink still converges, but only at reduced order with
//! a visibly larger constant (covered by a test in `numerics`).

use super::SolveError;

/// Panel layout for the solution quadrature (composite Simpson).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSpec {
    /// Total number of subintervals; must be even and at least 2.
    pub panels: usize,
    /// Subdivide `[0, 1]` at the kink `s = t` so each piece is smooth.
    pub split_at_kink: bool,
}

impl QuadratureSpec {
    pub const fn new(panels: usize, split_at_kink: bool) -> Self {
        Self {
            panels,
            split_at_kink,
        }
    }

    pub(crate) fn validate(&self) -> Result<(), SolveError> {
        if self.panels < 2 || self.panels % 2 != 0 {
            return Err(SolveError::InvalidGrid {
                what: "quadrature panels must be even and at least 2",
            });
        }
        Ok(())
    }
}

impl Default for QuadratureSpec {
    /// 256 panels, split at the kink.
    fn default() -> Self {
        Self::new(256, true)
    }
}

/// Composite Simpson on `[a, b]` with `panels` (even, >= 2) subintervals.
pub(crate) fn simpson<E>(
    f: &mut dyn FnMut(f64) -> Result<f64, E>,
    a: f64,
    b: f64,
    panels: usize,
) -> Result<f64, E> {
    debug_assert!(panels >= 2 && panels % 2 == 0);
    let h = (b - a) / panels as f64;
    let mut acc = f(a)? + f(b)?;
    for j in 1..panels {
        let weight = if j % 2 == 1 { 4.0 } else { 2.0 };
        acc += weight * f(a + h * j as f64)?;
    }
    Ok(acc * h / 3.0)
}

/// Integrates `f` over `[0, 1]`, optionally splitting the panel budget at an
/// interior kink location. Each side keeps at least 2 panels and panel
/// counts stay even, so the total work stays close to `panels`.
pub(crate) fn integrate_unit<E>(
    f: &mut dyn FnMut(f64) -> Result<f64, E>,
    kink: Option<f64>,
    panels: usize,
) -> Result<f64, E> {
    match kink {
        Some(c) if c > 0.0 && c < 1.0 => {
            let left = even_at_least_2((panels as f64 * c) as usize);
            let right = even_at_least_2(panels.saturating_sub(left));
            Ok(simpson(f, 0.0, c, left)? + simpson(f, c, 1.0, right)?)
        }
        _ => simpson(f, 0.0, 1.0, panels),
    }
}

fn even_at_least_2(n: usize) -> usize {
    let n = n + n % 2;
    n.max(2)
}
