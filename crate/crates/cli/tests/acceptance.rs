//! Acceptance gate: nine end-to-end criteria covering kernel validity,
//! the frozen frontier constants, analytic/empirical cross-agreement,
//! manufactured solutions, and figure reproduction through the real
//! binary. Each test prints one summary line; run with `--nocapture` to
//! see the table.

mod common;

use std::time::Instant;

use greensign_core::regions::{delta1_bound_neg, delta1_bound_pos, frontier_f, frontier_g, frontier_k};
use greensign_core::{
    classify, convergence_study, empirical_classify, parse_sigma, solve_fd, solve_green,
    ProblemParams, QuadratureSpec, Side, SignClass, SolveMethod, PI_SQUARED,
};

// ---- deterministic sampling -----------------------------------------

struct SplitMix64(u64);

impl SplitMix64 {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in [lo, hi).
    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        let u = (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
        lo + (hi - lo) * u
    }
}

/// Nonresonant triple with the regime of `M` cycling through zero,
/// trigonometric and hyperbolic.
fn sample_triple(rng: &mut SplitMix64, i: usize) -> ProblemParams {
    loop {
        let m = match i % 3 {
            0 => 0.0,
            1 => rng.uniform(0.3, 9.3),
            _ => rng.uniform(-9.7, -0.3),
        };
        let delta1 = rng.uniform(-3.0, 3.0);
        let delta2 = rng.uniform(-8.0, 8.0);
        let p = ProblemParams::new(m, delta1, delta2);
        if (delta2 - m).abs() >= 0.5 && p.solvability().is_ok() {
            return p;
        }
    }
}

/// Composite Simpson with an even panel count.
fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let n = panels.max(2) & !1;
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

/// `∫₀¹ G(t, s) dt`, split at the kink.
fn kernel_t_integral(p: &ProblemParams, s: f64, panels: usize) -> f64 {
    let f = |t: f64| p.green(t, s).unwrap();
    simpson(&f, 0.0, s, panels) + simpson(&f, s, 1.0, panels)
}

// ---- criterion 1: kernel validity suite ------------------------------

#[test]
fn criterion_1_kernel_validity_suite() {
    let start = Instant::now();
    let mut rng = SplitMix64(0xACCE_0001);
    for i in 0..12 {
        let p = sample_triple(&mut rng, i);

        // jump of dG/dt across t = s equals 1
        for _ in 0..50 {
            let s = rng.uniform(0.01, 0.99);
            let jump = p.green_dt(s, s, Side::Right).unwrap()
                - p.green_dt(s, s, Side::Left).unwrap();
            assert!(
                (jump - 1.0).abs() <= 1e-9,
                "jump {jump} at s = {s}, params {p:?}"
            );
        }

        // both integral boundary conditions, by independent quadrature
        for s in [0.21, 0.5, 0.84] {
            let integral = kernel_t_integral(&p, s, 512);
            let value_bc =
                p.green(0.0, s).unwrap() - p.green(1.0, s).unwrap() - p.delta1 * integral;
            let slope_bc = p.green_dt(0.0, s, Side::Right).unwrap()
                - p.green_dt(1.0, s, Side::Left).unwrap()
                - p.delta2 * integral;
            assert!(value_bc.abs() <= 1e-9, "value bc {value_bc}, params {p:?}");
            assert!(slope_bc.abs() <= 1e-9, "slope bc {slope_bc}, params {p:?}");
        }

        // G'' + M G = 0 away from the diagonal
        for it in 0..21 {
            let t = it as f64 / 20.0;
            for is in 0..21 {
                let s = is as f64 / 20.0;
                if (t - s).abs() <= 0.01 {
                    continue;
                }
                let defect = p.green_dtt(t, s).unwrap() + p.m * p.green(t, s).unwrap();
                assert!(defect.abs() <= 1e-8, "ode defect {defect} at ({t}, {s})");
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 5.0, "criterion 1 took {elapsed:.2}s, budget 5s");
    println!("criterion 1 (kernel validity: jump, bcs, ode): pass in {elapsed:.2}s");
}

// ---- criterion 2: periodic base kernel integral ----------------------

#[test]
fn criterion_2_base_kernel_integral_is_reciprocal_m() {
    let mut rng = SplitMix64(0xACCE_0002);
    for m in [0.5, -0.5, 1.0, -1.0, 4.0, -4.0, 9.0] {
        let p = ProblemParams::new(m, 0.0, 0.0);
        for _ in 0..20 {
            let s = rng.uniform(0.0, 1.0);
            let integral = kernel_t_integral(&p, s, 512);
            assert!(
                (integral - 1.0 / m).abs() <= 1e-10,
                "integral {integral} vs 1/{m} at s = {s}"
            );
        }
    }
    println!("criterion 2 (base kernel row integral = 1/M): pass");
}

// ---- criterion 3: reflection symmetry --------------------------------

#[test]
fn criterion_3_reflection_symmetry() {
    let mut rng = SplitMix64(0xACCE_0003);
    for i in 0..12 {
        let p = sample_triple(&mut rng, i);
        let q = ProblemParams::new(p.m, -p.delta1, p.delta2);
        for it in 0..41 {
            let t = it as f64 / 40.0;
            for is in 0..41 {
                let s = is as f64 / 40.0;
                let a = p.green(t, s).unwrap();
                let b = q.green(1.0 - t, 1.0 - s).unwrap();
                assert!(
                    (a - b).abs() <= 1e-12 * (1.0 + a.abs()),
                    "asymmetry {} at ({t}, {s}), params {p:?}",
                    a - b
                );
            }
        }
    }
    println!("criterion 3 (reflection symmetry to 1e-12 relative): pass");
}

// ---- criterion 4: frontier sharpness at M = 0 ------------------------

#[test]
fn criterion_4_zero_mass_frontier_sharpness() {
    // the zero of G_{0,0,8} sits exactly at (t, s) = (1, 1/2)
    let touch = ProblemParams::new(0.0, 0.0, 8.0).green(1.0, 0.5).unwrap();
    assert!(touch.abs() <= 1e-14, "G_(0,0,8)(1, 1/2) = {touch}");

    let class = |d1: f64, d2: f64| {
        empirical_classify(&ProblemParams::new(0.0, d1, d2), 201, None)
            .unwrap()
            .class
    };
    // delta2 crossing the upper frontier 8 and the lower frontier -8
    assert_eq!(class(0.0, 8.0 - 1e-3), SignClass::StrictlyNegative);
    assert_eq!(class(0.0, 8.0 + 1e-3), SignClass::SignChanging);
    assert_eq!(class(0.0, -8.0 + 1e-3), SignClass::StrictlyPositive);
    assert_eq!(class(0.0, -8.0 - 1e-3), SignClass::SignChanging);
    // delta1 crossing the half-width 2 - delta2/4 inside the negativity band
    for d2 in [2.0, 4.0, 6.0] {
        let bound = 2.0 - d2 / 4.0;
        assert_eq!(class(bound - 1e-3, d2), SignClass::StrictlyNegative, "d2 = {d2}");
        assert_eq!(class(bound + 1e-3, d2), SignClass::SignChanging, "d2 = {d2}");
    }
    println!("criterion 4 (M = 0 frontier sharpness, flips within 1e-3): pass");
}

// ---- criterion 5: frontier functions ---------------------------------

#[test]
fn criterion_5_frontier_functions() {
    // four-digit reference values re-evaluated independently at high
    // precision
    assert!((frontier_f(-1.0).unwrap() - 7.8354).abs() <= 1e-3);
    assert!((frontier_g(-1.0).unwrap() - -8.8354).abs() <= 1e-3);
    assert!((frontier_k(-1.0).unwrap() - -4.6827).abs() <= 1e-3);
    assert!((frontier_f(1.0).unwrap() - 8.1688).abs() <= 1e-3);

    let mut rng = SplitMix64(0xACCE_0005);
    for _ in 0..200 {
        let m = rng.uniform(-30.0, PI_SQUARED - 1e-9);
        let f = frontier_f(m).unwrap();
        let g = frontier_g(m).unwrap();
        let k = frontier_k(m).unwrap();
        assert!(g < k && k < m && m < f, "ordering broken at M = {m}");
    }

    for _ in 0..20 {
        let m = rng.uniform(-20.0, 9.0);
        let k = frontier_k(m).unwrap();
        let below = delta1_bound_pos(m, k - 1e-9).unwrap();
        let above = delta1_bound_pos(m, k + 1e-9).unwrap();
        assert!(
            (below - above).abs() <= 1e-9,
            "bound discontinuous at k({m}) = {k}: {below} vs {above}"
        );
    }
    println!("criterion 5 (frontier values, ordering, bound continuity): pass");
}

// ---- criterion 6: analytic vs empirical agreement --------------------

#[test]
fn criterion_6_analytic_empirical_agreement() {
    let start = Instant::now();
    let mut rng = SplitMix64(0xACCE_0006);
    let mut accepted = 0usize;
    let mut attempts = 0usize;
    while accepted < 500 {
        attempts += 1;
        assert!(attempts < 20_000, "sampling stalled after {attempts} attempts");
        let m = rng.uniform(-20.0, 14.0);
        let delta1 = rng.uniform(-4.0, 4.0);
        let delta2 = rng.uniform(-9.0, 9.0);
        let p = ProblemParams::new(m, delta1, delta2);
        if p.solvability().is_err() {
            continue;
        }
        // stay off the degenerate line by a comfortable margin
        if (m - PI_SQUARED).abs() < 0.2 {
            continue;
        }
        let analytic = classify(p);
        let strict = matches!(
            analytic.class,
            SignClass::StrictlyPositive
                | SignClass::StrictlyNegative
                | SignClass::SignChanging
        );
        if !strict {
            continue;
        }
        // at least 1% frontier margin relative to the delta2 scale
        if let Some(d) = analytic.frontier_distances.min_abs() {
            if d < 0.01 * (1.0 + delta2.abs()) {
                continue;
            }
        }
        let empirical = empirical_classify(&p, 201, None).unwrap();
        assert_eq!(
            empirical.class, analytic.class,
            "disagreement at {p:?} (analytic {}, empirical {})",
            analytic.class, empirical.class
        );
        accepted += 1;
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 60.0, "criterion 6 took {elapsed:.1}s, budget 60s");
    println!(
        "criterion 6 (500/500 analytic-empirical agreements, {attempts} draws): \
         pass in {elapsed:.1}s"
    );
}

// ---- criterion 7: manufactured solutions -----------------------------

#[test]
fn criterion_7_manufactured_solutions() {
    // u = t for (M, d1, d2) = (1, -2, 0), sigma = t
    let p = ProblemParams::new(1.0, -2.0, 0.0);
    let sigma = parse_sigma("t").unwrap();
    let quad = QuadratureSpec {
        panels: 256,
        split_at_kink: true,
    };
    let green = solve_green(&p, &sigma, quad, 257).unwrap();
    let fd = solve_fd(&p, &sigma, 256).unwrap();
    for r in [&green, &fd] {
        let worst = r
            .grid
            .iter()
            .zip(&r.u)
            .map(|(t, u)| (u - t).abs())
            .fold(0.0_f64, f64::max);
        assert!(worst <= 1e-10, "{} error {worst}", r.method.as_str());
    }

    // u = t(1 - t) for (1, 0, 12): second-order finite differences
    let p2 = ProblemParams::new(1.0, 0.0, 12.0);
    let sigma2 = parse_sigma("-2 + t*(1-t)").unwrap();
    let exact = |t: f64| t * (1.0 - t);
    let study = convergence_study(
        &p2,
        &sigma2,
        SolveMethod::FiniteDifference,
        &[32, 64, 128, 256],
        Some(&exact),
    )
    .unwrap();
    assert!(
        (study.fitted_order - 2.0).abs() <= 0.2,
        "fd order {}",
        study.fitted_order
    );

    // cross-difference of the two solvers shrinks at second order
    let mut diffs = Vec::new();
    for n in [64usize, 128, 256] {
        let q = QuadratureSpec {
            panels: n,
            split_at_kink: true,
        };
        let a = solve_green(&p2, &sigma2, q, n + 1).unwrap();
        let b = solve_fd(&p2, &sigma2, n).unwrap();
        let d = a
            .u
            .iter()
            .zip(&b.u)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0_f64, f64::max);
        diffs.push(d);
    }
    for w in diffs.windows(2) {
        let ratio = w[0] / w[1];
        assert!(
            (3.2..=4.8).contains(&ratio),
            "cross-difference ratio {ratio} (diffs {diffs:?})"
        );
    }
    println!("criterion 7 (manufactured solutions, fd order 2, cross O(h^2)): pass");
}

// ---- criterion 8: figure reproduction through the binary -------------

struct ScanMap {
    xs: Vec<f64>,
    ys: Vec<f64>,
    classes: Vec<String>,
}

fn run_scan(x: &str, y: &str, fix: &str) -> ScanMap {
    let run = common::greensign(&["scan", "--x", x, "--y", y, "--fix", fix]);
    assert_eq!(run.code, 0, "scan failed: {}", run.stderr);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut classes = Vec::new();
    for line in run.stdout.lines().filter(|l| !l.starts_with('#')).skip(1) {
        let mut fields = line.split(',');
        let x: f64 = fields.next().unwrap().parse().unwrap();
        let y: f64 = fields.next().unwrap().parse().unwrap();
        let class = fields.next().unwrap().to_string();
        xs.push(x);
        ys.push(y);
        classes.push(class);
    }
    ScanMap { xs, ys, classes }
}

#[test]
fn criterion_8_figure_reproduction() {
    let steps = 351usize;
    let cell = 35.0 / 350.0; // 0.1 in both axes of the (M, delta2) plane

    // figure 1: the (M, delta2) plane at delta1 = 0
    let fig1 = run_scan("M:-20:15:351", "delta2:-20:15:351", "delta1=0");
    assert_eq!(fig1.classes.len(), steps * steps);
    let mut checked = 0usize;
    for idx in 0..steps * steps {
        let m = fig1.xs[idx];
        let d2 = fig1.ys[idx];
        if (m - PI_SQUARED).abs() <= cell {
            continue; // the degenerate column
        }
        let expected = if m > PI_SQUARED {
            if (d2 - m).abs() <= cell {
                continue; // resonant diagonal
            }
            "SignChanging"
        } else {
            let f = frontier_f(m).unwrap();
            let g = frontier_g(m).unwrap();
            // cells within one grid cell of a boundary may fall either side
            if (d2 - m).abs() <= cell || (d2 - f).abs() <= cell || (d2 - g).abs() <= cell {
                continue;
            }
            if d2 > m && d2 < f {
                "StrictlyNegative"
            } else if d2 > g && d2 < m {
                "StrictlyPositive"
            } else {
                "SignChanging"
            }
        };
        assert_eq!(
            fig1.classes[idx], expected,
            "fig 1 cell (M = {m}, delta2 = {d2})"
        );
        checked += 1;
    }
    assert!(checked > 100_000, "only {checked} cells checked");

    // figure 2: the (M, delta1) plane at delta2 = 0
    let fig2 = run_scan("M:-20:15:351", "delta1:-4:4:351", "delta2=0");
    let cell_y = 8.0 / 350.0;
    let mut checked2 = 0usize;
    for idx in 0..steps * steps {
        let m = fig2.xs[idx];
        let d1 = fig2.ys[idx];
        if m.abs() <= cell || (m - PI_SQUARED).abs() <= cell {
            continue; // resonant column M = 0 and the degenerate column
        }
        let expected = if m > PI_SQUARED {
            "SignChanging"
        } else if m > 0.0 {
            // delta2 = 0 sits inside the positivity band (g, M) iff g < 0
            if frontier_g(m).unwrap() >= -cell {
                continue;
            }
            let bound = delta1_bound_pos(m, 0.0).unwrap();
            if (d1.abs() - bound).abs() <= cell_y {
                continue;
            }
            if d1.abs() < bound {
                "StrictlyPositive"
            } else {
                "SignChanging"
            }
        } else {
            // delta2 = 0 sits inside the negativity band (M, f) iff f > 0
            let f = frontier_f(m).unwrap();
            if f.abs() <= cell {
                continue;
            }
            if f < 0.0 {
                "SignChanging"
            } else {
                let bound = delta1_bound_neg(m, 0.0).unwrap();
                if (d1.abs() - bound).abs() <= cell_y {
                    continue;
                }
                if d1.abs() < bound {
                    "StrictlyNegative"
                } else {
                    "SignChanging"
                }
            }
        };
        assert_eq!(
            fig2.classes[idx], expected,
            "fig 2 cell (M = {m}, delta1 = {d1})"
        );
        checked2 += 1;
    }
    assert!(checked2 > 100_000, "only {checked2} cells checked");

    // delta1 mirror symmetry, exact cell by cell
    for ix in 0..steps {
        for iy in 0..steps {
            let a = &fig2.classes[ix * steps + iy];
            let b = &fig2.classes[ix * steps + (steps - 1 - iy)];
            assert_eq!(a, b, "mirror broken at column {ix}, row {iy}");
        }
    }
    println!(
        "criterion 8 (figures 1-2 reproduced, {checked} + {checked2} cells, \
         mirror exact): pass"
    );
}

// ---- criterion 9: half-width on the negative side --------------------

#[test]
fn criterion_9_negative_band_half_width() {
    let bound = delta1_bound_neg(-1.0, 0.0).unwrap();
    assert!(
        (bound - 1.91903).abs() <= 1e-5,
        "delta1_bound_neg(-1, 0) = {bound}"
    );
    for d1 in [1.93, -1.93] {
        let report =
            empirical_classify(&ProblemParams::new(-1.0, d1, 0.0), 201, None).unwrap();
        assert_eq!(report.class, SignClass::SignChanging, "delta1 = {d1}");
    }
    for d1 in [1.90, -1.90] {
        let report =
            empirical_classify(&ProblemParams::new(-1.0, d1, 0.0), 201, None).unwrap();
        assert_eq!(report.class, SignClass::StrictlyNegative, "delta1 = {d1}");
    }
    println!("criterion 9 (negative-band bound 1.91903, sign loss above it): pass");
}
