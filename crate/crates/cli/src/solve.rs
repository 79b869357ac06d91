//! `solve`: compute `u(t) = ∫ G(t,s) σ(s) ds` on a uniform grid, by kernel
//! quadrature, finite differences, or both side by side.

use std::path::Path;

use greensign_core::{
    parse_sigma, solve_fd, solve_green, ProblemParams, QuadratureSpec, SolveReport,
};

use crate::args::{Method, SolveArgs};
use crate::error::CliError;
use crate::output::{self, fmt_f64, MethodOut, SolveOut};

pub fn run(args: &SolveArgs, json: bool, out: Option<&Path>) -> Result<i32, CliError> {
    let params = ProblemParams::new(args.problem.m, args.problem.d1, args.problem.d2);
    let sigma = parse_sigma(&args.sigma).map_err(|e| CliError::Sigma(e.to_string()))?;
    let n = args.n;

    // One shared grid: the quadrature solver is asked for n+1 output points
    // i/n, exactly the finite-difference nodes, so `both` can difference
    // pointwise.
    let quad = QuadratureSpec {
        panels: n,
        split_at_kink: true,
    };
    let reports: Vec<SolveReport> = match args.method {
        Method::Green => vec![solve_green(&params, &sigma, quad, n + 1)?],
        Method::Fd => vec![solve_fd(&params, &sigma, n)?],
        Method::Both => vec![
            solve_green(&params, &sigma, quad, n + 1)?,
            solve_fd(&params, &sigma, n)?,
        ],
    };

    let max_abs_diff = if reports.len() == 2 {
        Some(
            reports[0]
                .u
                .iter()
                .zip(&reports[1].u)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0_f64, f64::max),
        )
    } else {
        None
    };

    let report = SolveOut {
        command: "solve",
        params: params.into(),
        sigma: args.sigma.clone(),
        n,
        grid: reports[0].grid.clone(),
        results: reports
            .iter()
            .map(|r| MethodOut {
                method: r.method.as_str(),
                u: r.u.clone(),
                bc_residuals: r.bc_residuals,
                ode_residual_max: r.ode_residual_max,
                condition_estimate: r.condition_estimate,
            })
            .collect(),
        max_abs_diff,
    };
    let text = if json {
        output::to_json(&report)
    } else {
        render_csv(&report)
    };
    output::write_primary(out, &text)?;
    Ok(0)
}

/// CSV: `# key = value` header comments, then a header row, then one row
/// per grid point. With both methods the last column is the pointwise
/// absolute difference.
fn render_csv(r: &SolveOut) -> String {
    let both = r.results.len() == 2;
    let mut s = String::new();
    if both {
        s.push_str("# method = both\n");
    }
    for m in &r.results {
        let prefix = if both {
            format!("{}.", m.method)
        } else {
            s.push_str(&format!("# method = {}\n", m.method));
            String::new()
        };
        s.push_str(&format!(
            "# {prefix}bc_residual_value = {}\n",
            fmt_f64(m.bc_residuals[0])
        ));
        s.push_str(&format!(
            "# {prefix}bc_residual_slope = {}\n",
            fmt_f64(m.bc_residuals[1])
        ));
        s.push_str(&format!(
            "# {prefix}ode_residual_max = {}\n",
            fmt_f64(m.ode_residual_max)
        ));
        if let Some(cond) = m.condition_estimate {
            s.push_str(&format!(
                "# {prefix}condition_estimate = {}\n",
                fmt_f64(cond)
            ));
        }
    }
    if let Some(d) = r.max_abs_diff {
        s.push_str(&format!("# max_abs_diff = {}\n", fmt_f64(d)));
    }
    if both {
        s.push_str("t,u_green,u_fd,abs_diff\n");
        for i in 0..r.grid.len() {
            let a = r.results[0].u[i];
            let b = r.results[1].u[i];
            s.push_str(&format!(
                "{},{},{},{}\n",
                fmt_f64(r.grid[i]),
                fmt_f64(a),
                fmt_f64(b),
                fmt_f64((a - b).abs())
            ));
        }
    } else {
        s.push_str("t,u\n");
        for i in 0..r.grid.len() {
            s.push_str(&format!(
                "{},{}\n",
                fmt_f64(r.grid[i]),
                fmt_f64(r.results[0].u[i])
            ));
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::ProblemFlags;

    fn solve_args(sigma: &str, method: Method, n: usize) -> SolveArgs {
        SolveArgs {
            problem: ProblemFlags {
                m: 1.0,
                d1: -2.0,
                d2: 0.0,
            },
            sigma: String::from(sigma),
            method,
            n,
        }
    }

    #[test]
    fn sigma_parse_failure_is_a_usage_class_error_with_offset() {
        let err = run(&solve_args("t +* 2", Method::Green, 16), false, None).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert!(err.message().contains("byte 3"), "got: {}", err.message());
    }

    #[test]
    fn odd_panel_count_for_the_quadrature_method_is_rejected() {
        let err = run(&solve_args("t", Method::Green, 15), false, None).unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn resonant_parameters_exit_two() {
        let mut args = solve_args("1", Method::Fd, 64);
        args.problem.d2 = 1.0; // delta2 = M
        let err = run(&args, false, None).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
