//! `eval`: point evaluation of the kernel and its one-sided `t`-derivatives.

use std::path::Path;

use greensign_core::{ProblemParams, Side};

use crate::args::EvalArgs;
use crate::error::CliError;
use crate::output::{self, fmt_f64, EvalOut};

pub fn run(args: &EvalArgs, json: bool, out: Option<&Path>) -> Result<i32, CliError> {
    check_unit_interval(args.t, "t")?;
    check_unit_interval(args.s, "s")?;
    let params = ProblemParams::new(args.problem.m, args.problem.d1, args.problem.d2);

    let value = params.green(args.t, args.s)?;
    let dt_left = params.green_dt(args.t, args.s, Side::Left)?;
    let dt_right = params.green_dt(args.t, args.s, Side::Right)?;
    let branch = if args.t > args.s {
        "lower"
    } else if args.t < args.s {
        "upper"
    } else {
        "diagonal"
    };

    let report = EvalOut {
        command: "eval",
        params: params.into(),
        t: args.t,
        s: args.s,
        value,
        dt_left,
        dt_right,
        branch,
        solvable: true,
    };
    let text = if json {
        output::to_json(&report)
    } else {
        render_text(&report)
    };
    output::write_primary(out, &text)?;
    Ok(0)
}

fn render_text(r: &EvalOut) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "M = {}  delta1 = {}  delta2 = {}\n",
        fmt_f64(r.params.m),
        fmt_f64(r.params.delta1),
        fmt_f64(r.params.delta2)
    ));
    s.push_str(&format!(
        "G({}, {}) = {}\n",
        fmt_f64(r.t),
        fmt_f64(r.s),
        fmt_f64(r.value)
    ));
    s.push_str(&format!(
        "dG/dt left  = {}\ndG/dt right = {}\n",
        fmt_f64(r.dt_left),
        fmt_f64(r.dt_right)
    ));
    s.push_str(&format!("branch = {}    solvable = yes\n", r.branch));
    s
}

fn check_unit_interval(x: f64, name: &'static str) -> Result<(), CliError> {
    if x.is_finite() && (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "{name} must lie in [0, 1], got {x}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::ProblemFlags;

    fn eval_args(m: f64, d1: f64, d2: f64, t: f64, s: f64) -> EvalArgs {
        EvalArgs {
            problem: ProblemFlags { m, d1, d2 },
            t,
            s,
        }
    }

    #[test]
    fn rejects_points_off_the_unit_square() {
        let err = run(&eval_args(1.0, 0.0, 0.0, 1.5, 0.5), false, None).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        let err = run(&eval_args(1.0, 0.0, 0.0, 0.5, -0.1), false, None).unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn resonance_maps_to_exit_two() {
        let err = run(&eval_args(1.0, 0.0, 1.0, 0.5, 0.5), false, None).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.message().contains("delta2 equals M"));
    }
}
