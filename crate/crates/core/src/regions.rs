//! Sign classification of the kernel over the parameter space
//! `(M, delta1, delta2)`.
//!
//! For `M < pi^2` (including `M = 0` and `M < 0`) the `(M, delta2)` plane
//! carries three frontier curves, ordered `g(M) < k(M) < M < f(M)`:
//!
//! * `delta2` in `(g(M), M)` is the *positivity band*: the kernel is strictly
//!   positive on the open square iff `|delta1|` stays below a half-width
//!   [`delta1_bound_pos`], and changes sign once `|delta1|` exceeds it.
//! * `delta2` in `(M, f(M))` is the *negativity band*, with half-width
//!   [`delta1_bound_neg`].
//! * outside `[g(M), f(M)]` the kernel changes sign for every `delta1`.
//! * `k(M)` is interior to the positivity band: it marks where the
//!   `delta1`-half-width switches between its two closed forms (the curves
//!   meet continuously there).
//!
//! At `M = pi^2` the bands collapse (`g = k = 0`, `f = M`) and only a
//! degenerate non-negative case survives on the axis `delta1 = 0`,
//! `0 <= delta2 < pi^2`. For `M > pi^2` (away from the resonant set) the
//! kernel always changes sign.
//!
//! All frontier evaluations treat `M = 0` exactly, not as a limit:
//! `f(0) = 8`, `g(0) = -8`, `k(0) = -4`, and the half-widths have their own
//! closed forms there. The limits from either side agree with these values.

use core::fmt;

use crate::kernel::{ProblemParams, PI_SQUARED};
use crate::math;

/// Relative tolerance for "sitting on a frontier" in [`classify`].
pub const FRONTIER_REL_TOL: f64 = 1e-10;

/// Absolute half-width of the band around `M = pi^2` treated as the
/// degenerate line. Wide enough that a decimal spelling of `pi^2` rounded to
/// eight significant figures still lands on the line.
pub const PI_SQUARED_BAND: f64 = 1e-8;

/// Errors from the frontier/bound evaluators (the classifier itself is
/// total).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegionError {
    /// Frontier curves are only defined for `M <= pi^2`.
    MOutOfRange { m: f64 },
    /// `delta2` lies outside the band `(lo, hi)` on which the requested
    /// half-width is defined.
    Delta2OutOfRange { m: f64, delta2: f64, lo: f64, hi: f64 },
}

impl fmt::Display for RegionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RegionError::MOutOfRange { m } => {
                write!(f, "M = {m} is outside the classified range M <= pi^2")
            }
            RegionError::Delta2OutOfRange { m, delta2, lo, hi } => {
                write!(
                    f,
                    "delta2 = {delta2} is outside the band ({lo}, {hi}) at M = {m}"
                )
            }
        }
    }
}

impl core::error::Error for RegionError {}

/// Sign class of the kernel at one parameter triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignClass {
    /// `G > 0` on the open square.
    StrictlyPositive,
    /// `G < 0` on the open square.
    StrictlyNegative,
    /// `G` takes both signs.
    SignChanging,
    /// Resonant parameters: no kernel exists.
    NotUniquelySolvable,
    /// `M = pi^2`, `delta1 = 0`, `0 <= delta2 < pi^2`: non-negative with
    /// zeros (at the corner set, and for `delta2 = 0` along the diagonal).
    DegenerateNonNegative,
    /// Parameters sit on a frontier curve within [`FRONTIER_REL_TOL`].
    OnFrontier,
    /// No sign statement is available for these parameters.
    OutsideTheory,
}

impl SignClass {
    /// Stable string form used by CSV/JSON output.
    pub fn as_str(&self) -> &'static str {
        match self {
            SignClass::StrictlyPositive => "StrictlyPositive",
            SignClass::StrictlyNegative => "StrictlyNegative",
            SignClass::SignChanging => "SignChanging",
            SignClass::NotUniquelySolvable => "NotUniquelySolvable",
            SignClass::DegenerateNonNegative => "DegenerateNonNegative",
            SignClass::OnFrontier => "OnFrontier",
            SignClass::OutsideTheory => "OutsideTheory",
        }
    }
}

impl fmt::Display for SignClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Signed distances from `(delta1, delta2)` to each frontier at this `M`
/// (`None` where the curve does not exist, i.e. `M > pi^2`).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FrontierDistances {
    /// `delta2 - g(M)`.
    pub to_g: Option<f64>,
    /// `delta2 - f(M)`.
    pub to_f: Option<f64>,
    /// `delta2 - k(M)`.
    pub to_k: Option<f64>,
    /// `|delta1| - half-width`, when `delta2` lies in one of the two bands.
    pub to_delta1_bound: Option<f64>,
}

impl FrontierDistances {
    /// Smallest absolute distance to any existing frontier.
    pub fn min_abs(&self) -> Option<f64> {
        [self.to_g, self.to_f, self.to_k, self.to_delta1_bound]
            .into_iter()
            .flatten()
            .map(math::abs)
            .min_by(f64::total_cmp)
    }
}

/// Full classification result for one parameter triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyReport {
    pub params: ProblemParams,
    pub class: SignClass,
    /// Half-width of the constant-sign interval in `delta1` at this
    /// `(M, delta2)`; `0.0` where no such interval exists.
    pub delta1_bound: f64,
    pub frontier_distances: FrontierDistances,
}

/// Upper frontier `f(M)` of the negativity band `(M, f(M))`. `f(0) = 8`.
pub fn frontier_f(m: f64) -> Result<f64, RegionError> {
    check_m(m)?;
    Ok(frontier_f_raw(m))
}

/// Lower frontier `g(M)` of the positivity band `(g(M), M)`. `g(0) = -8`.
pub fn frontier_g(m: f64) -> Result<f64, RegionError> {
    check_m(m)?;
    Ok(frontier_g_raw(m))
}

/// Switch curve `k(M)` inside the positivity band where the two closed forms
/// of [`delta1_bound_pos`] meet. `k(0) = -4`.
pub fn frontier_k(m: f64) -> Result<f64, RegionError> {
    check_m(m)?;
    Ok(frontier_k_raw(m))
}

fn check_m(m: f64) -> Result<(), RegionError> {
    if m > PI_SQUARED {
        Err(RegionError::MOutOfRange { m })
    } else {
        Ok(())
    }
}

// The raw frontier forms assume M <= pi^2. Denominators are rewritten with
// expm1 / half-angle identities so the M -> 0 limits evaluate without
// cancellation; for M < 0 all exponents are <= 0, so nothing overflows.

fn frontier_f_raw(m: f64) -> f64 {
    if m == 0.0 {
        8.0
    } else if m > 0.0 {
        // m / (1 - cos(w/2)) with 1 - cos x = 2 sin^2(x/2)
        let w = math::sqrt(m);
        let s = math::sin(0.25 * w);
        m / (2.0 * s * s)
    } else {
        // 2|M| e^{w/2} / (e^{w/2} - 1)^2, rescaled by e^{-w}
        let w = math::sqrt(-m);
        let e = math::expm1(-0.5 * w);
        2.0 * (-m) * math::exp(-0.5 * w) / (e * e)
    }
}

fn frontier_g_raw(m: f64) -> f64 {
    if m == 0.0 {
        -8.0
    } else if m > 0.0 {
        let w = math::sqrt(m);
        let s = math::sin(0.25 * w);
        -m * math::cos(0.5 * w) / (2.0 * s * s)
    } else {
        // M cosh(w/2) / (cosh(w/2) - 1), rescaled by e^{-w/2}
        let w = math::sqrt(-m);
        let e = math::expm1(-0.5 * w);
        m * (1.0 + math::exp(-w)) / (e * e)
    }
}

fn frontier_k_raw(m: f64) -> f64 {
    if m == 0.0 {
        -4.0
    } else if m > 0.0 {
        let w = math::sqrt(m);
        let c = math::cos(0.5 * w) / math::sin(0.5 * w);
        -m * c * c
    } else {
        // M coth^2(w/2) with coth(h) = -(1 + e^{-2h}) / expm1(-2h)
        let w = math::sqrt(-m);
        let c = (1.0 + math::exp(-w)) / math::expm1(-w);
        m * c * c
    }
}

/// Half-width of the `delta1` interval on which the kernel stays strictly
/// positive, for `delta2` inside the positivity band `(g(M), M)`.
///
/// Two closed forms, meeting continuously at `delta2 = k(M)`:
/// `delta2` in `(k, M)` gives a `delta2`-independent plateau
/// (`w cot(w/2)`, `w coth(w/2)`, or `2` at `M = 0`), and `delta2` in
/// `(g, k]` gives a square-root form that closes to `0` at `delta2 = g(M)`.
pub fn delta1_bound_pos(m: f64, delta2: f64) -> Result<f64, RegionError> {
    check_m(m)?;
    let g = frontier_g_raw(m);
    if !(delta2 > g && delta2 < m) {
        return Err(RegionError::Delta2OutOfRange {
            m,
            delta2,
            lo: g,
            hi: m,
        });
    }
    Ok(delta1_bound_pos_raw(m, delta2))
}

fn delta1_bound_pos_raw(m: f64, delta2: f64) -> f64 {
    let k = frontier_k_raw(m);
    if m == 0.0 {
        if delta2 > k {
            2.0
        } else {
            0.5 * math::sqrt(-delta2 * (8.0 + delta2))
        }
    } else if m > 0.0 {
        let w = math::sqrt(m);
        if delta2 > k {
            w * math::cos(0.5 * w) / math::sin(0.5 * w)
        } else {
            let c = math::cos(0.5 * w) * (m - delta2);
            // rounding can push the radicand marginally negative at delta2 ~ g
            math::sqrt(f64::max(c * c - delta2 * delta2, 0.0)) / w
        }
    } else {
        let w = math::sqrt(-m);
        if delta2 > k {
            w * (1.0 + math::exp(-w)) / (-math::expm1(-w))
        } else {
            let c = math::cosh(0.5 * w) * (delta2 - m);
            math::sqrt(f64::max(delta2 * delta2 - c * c, 0.0)) / w
        }
    }
}

/// Half-width of the `delta1` interval on which the kernel stays strictly
/// negative, for `delta2` inside the negativity band `(M, f(M))`.
///
/// One formula covers every regime: `2 (M - delta2) G_{M,0,delta2}(1, 1/2)`.
/// At `M = 0` this reduces to `2 - delta2/4`; for `delta2 = 0`, `M = -w^2` it
/// reduces to `2 w e^{w/2} / (e^w - 1)` (note the denominator `e^w - 1 > 0`:
/// writing it as `1 - e^w` would flip the sign and empty the interval).
pub fn delta1_bound_neg(m: f64, delta2: f64) -> Result<f64, RegionError> {
    let f = frontier_f(m)?;
    if !(delta2 > m && delta2 < f) {
        return Err(RegionError::Delta2OutOfRange {
            m,
            delta2,
            lo: m,
            hi: f,
        });
    }
    ProblemParams::new(m, 0.0, delta2)
        .green(1.0, 0.5)
        .map(|gc| 2.0 * (m - delta2) * gc)
        .map_err(|_| RegionError::Delta2OutOfRange {
            m,
            delta2,
            lo: m,
            hi: f,
        })
}

/// Total sign classification of one parameter triple.
///
/// Decision order: resonance, the degenerate line `M = pi^2`, the
/// out-of-range half-plane `M > pi^2`, then the banded `M < pi^2` picture.
/// Frontier coincidences within [`FRONTIER_REL_TOL`] (relative) win over the
/// band verdicts. Only `|delta1|` enters, so the result is symmetric in
/// `delta1`.
pub fn classify(params: ProblemParams) -> ClassifyReport {
    let ProblemParams { m, delta1, delta2 } = params;

    if params.solvability().is_err() {
        let frontier_distances = if m <= PI_SQUARED {
            distances_at(m, delta2, None)
        } else {
            FrontierDistances::default()
        };
        return ClassifyReport {
            params,
            class: SignClass::NotUniquelySolvable,
            delta1_bound: 0.0,
            frontier_distances,
        };
    }

    if math::abs(m - PI_SQUARED) <= PI_SQUARED_BAND {
        let class = if delta1 == 0.0 && delta2 >= 0.0 && delta2 < m {
            SignClass::DegenerateNonNegative
        } else {
            SignClass::OutsideTheory
        };
        return ClassifyReport {
            params,
            class,
            delta1_bound: 0.0,
            frontier_distances: distances_at(PI_SQUARED, delta2, None),
        };
    }

    if m > PI_SQUARED {
        return ClassifyReport {
            params,
            class: SignClass::SignChanging,
            delta1_bound: 0.0,
            frontier_distances: FrontierDistances::default(),
        };
    }

    let g = frontier_g_raw(m);
    let f = frontier_f_raw(m);
    let a1 = math::abs(delta1);

    let (band_class, bound) = if delta2 > g && delta2 < m {
        let b = delta1_bound_pos_raw(m, delta2);
        let class = if a1 < b {
            SignClass::StrictlyPositive
        } else {
            SignClass::SignChanging
        };
        (class, Some(b))
    } else if delta2 > m && delta2 < f {
        let b = 2.0
            * (m - delta2)
            * ProblemParams::new(m, 0.0, delta2)
                .green(1.0, 0.5)
                .expect("non-resonant by construction");
        let class = if a1 < b {
            SignClass::StrictlyNegative
        } else {
            SignClass::SignChanging
        };
        (class, Some(b))
    } else {
        (SignClass::SignChanging, None)
    };

    // Only genuine sign frontiers trigger the OnFrontier verdict: the band
    // edges g and f, and the half-width surface |delta1| = bound. The switch
    // curve k is where the bound formula changes branch, not where the sign
    // class changes, so contact with it stays an ordinary band verdict (its
    // distance is still reported).
    let frontier_distances = distances_at(m, delta2, bound.map(|b| a1 - b));
    let on_frontier = rel_close(delta2, g)
        || rel_close(delta2, f)
        || bound.map(|b| rel_close(a1, b)).unwrap_or(false);

    ClassifyReport {
        params,
        class: if on_frontier {
            SignClass::OnFrontier
        } else {
            band_class
        },
        delta1_bound: bound.unwrap_or(0.0),
        frontier_distances,
    }
}

fn distances_at(m: f64, delta2: f64, to_delta1_bound: Option<f64>) -> FrontierDistances {
    FrontierDistances {
        to_g: Some(delta2 - frontier_g_raw(m)),
        to_f: Some(delta2 - frontier_f_raw(m)),
        to_k: Some(delta2 - frontier_k_raw(m)),
        to_delta1_bound,
    }
}

fn rel_close(a: f64, b: f64) -> bool {
    let scale = f64::max(1.0, f64::max(math::abs(a), math::abs(b)));
    math::abs(a - b) <= FRONTIER_REL_TOL * scale
}
