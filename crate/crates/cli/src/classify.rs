//! `classify`: analytic sign classification, optionally cross-checked
//! against the empirical grid scanner.

use std::path::Path;

use greensign_core::{classify, empirical_classify, ProblemParams, SignClass};

use crate::args::ClassifyArgs;
use crate::error::CliError;
use crate::output::{self, fmt_f64, ClassifyOut, DistancesOut, EmpiricalOut};

pub fn run(args: &ClassifyArgs, json: bool, out: Option<&Path>) -> Result<i32, CliError> {
    let params = ProblemParams::new(args.problem.m, args.problem.d1, args.problem.d2);
    let analytic = classify(params);

    let mut empirical = None;
    let mut empirical_note = None;
    let mut exit = 0;
    if args.empirical {
        if analytic.class == SignClass::NotUniquelySolvable {
            empirical_note = Some(String::from("skipped (resonant parameters)"));
        } else {
            let report = empirical_classify(&params, args.grid_n, None)?;
            let agrees = agreement(analytic.class, report.class);
            exit = exit_for(agrees);
            empirical = Some(EmpiricalOut {
                class: report.class.as_str(),
                min: report.min,
                max: report.max,
                tol: report.tol,
                samples: report.samples,
                agrees_with_analytic: agrees,
            });
        }
    }

    let report = ClassifyOut {
        command: "classify",
        params: params.into(),
        class: analytic.class.as_str(),
        delta1_bound: analytic.delta1_bound,
        frontier_distances: DistancesOut {
            to_g: analytic.frontier_distances.to_g,
            to_f: analytic.frontier_distances.to_f,
            to_k: analytic.frontier_distances.to_k,
            to_delta1_bound: analytic.frontier_distances.to_delta1_bound,
        },
        empirical,
        empirical_note,
    };
    let text = if json {
        output::to_json(&report)
    } else {
        render_text(&report)
    };
    output::write_primary(out, &text)?;
    if exit != 0 && !json {
        eprintln!(
            "error: analytic class {} disagrees with empirical class {}",
            report.class,
            report.empirical.as_ref().map_or("?", |e| e.class)
        );
    }
    Ok(exit)
}

/// `None` when the analytic side makes no strict sign claim to test.
/// An empirical `OnFrontier` verdict (grazing zero) never counts as a
/// contradiction: it is what frontier-tolerance closeness looks like on a
/// grid.
fn agreement(analytic: SignClass, empirical: SignClass) -> Option<bool> {
    match analytic {
        SignClass::StrictlyPositive
        | SignClass::StrictlyNegative
        | SignClass::SignChanging => {
            Some(empirical == analytic || empirical == SignClass::OnFrontier)
        }
        SignClass::DegenerateNonNegative => Some(matches!(
            empirical,
            SignClass::OnFrontier | SignClass::StrictlyPositive
        )),
        _ => None,
    }
}

/// A contradicted strict claim is the one nonzero outcome of this command.
fn exit_for(agrees: Option<bool>) -> i32 {
    if agrees == Some(false) {
        3
    } else {
        0
    }
}

fn render_text(r: &ClassifyOut) -> String {
    let mut s = String::new();
    s.push_str(&format!(
        "M = {}  delta1 = {}  delta2 = {}\n",
        fmt_f64(r.params.m),
        fmt_f64(r.params.delta1),
        fmt_f64(r.params.delta2)
    ));
    s.push_str(&format!("class           = {}\n", r.class));
    s.push_str(&format!(
        "delta1 bound    = {}\n",
        fmt_f64(r.delta1_bound)
    ));
    s.push_str(&format!(
        "to g            = {}\n",
        opt(r.frontier_distances.to_g)
    ));
    s.push_str(&format!(
        "to f            = {}\n",
        opt(r.frontier_distances.to_f)
    ));
    s.push_str(&format!(
        "to k            = {}\n",
        opt(r.frontier_distances.to_k)
    ));
    s.push_str(&format!(
        "to delta1 bound = {}\n",
        opt(r.frontier_distances.to_delta1_bound)
    ));
    if let Some(e) = &r.empirical {
        s.push_str(&format!(
            "empirical       = {}  (min = {}, max = {}, tol = {}, samples = {})\n",
            e.class,
            fmt_f64(e.min),
            fmt_f64(e.max),
            fmt_f64(e.tol),
            e.samples
        ));
        let verdict = match e.agrees_with_analytic {
            Some(true) => "yes",
            Some(false) => "NO",
            None => "n/a (no strict analytic claim)",
        };
        s.push_str(&format!("agreement       = {verdict}\n"));
    }
    if let Some(note) = &r.empirical_note {
        s.push_str(&format!("empirical       = {note}\n"));
    }
    s
}

fn opt(x: Option<f64>) -> String {
    match x {
        Some(v) => fmt_f64(v),
        None => String::from("n/a"),
    }
}
