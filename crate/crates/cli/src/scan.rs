//! `scan`: classify a 2D slice of `(M, delta1, delta2)` space into a CSV
//! class map, optionally painted as an SVG.

use std::fs;
use std::path::Path;

use rayon::prelude::*;

use greensign_core::{classify, ProblemParams, SignClass};

use crate::args::{AxisSpec, ParamName, ScanArgs};
use crate::error::CliError;
use crate::output::{self, fmt_f64, AxisOut, CellOut, FixOut, ScanOut};

struct Cell {
    class: SignClass,
    delta1_bound: f64,
    frontier_min_distance: Option<f64>,
}

pub fn run(args: &ScanArgs, json: bool, out: Option<&Path>) -> Result<i32, CliError> {
    check_axis(&args.x)?;
    check_axis(&args.y)?;
    let names = [args.x.name, args.y.name, args.fix.name];
    if names[0] == names[1] || names[0] == names[2] || names[1] == names[2] {
        return Err(CliError::Usage(format!(
            "scan axes and --fix must name three distinct parameters \
             (got {}, {}, {})",
            names[0], names[1], names[2]
        )));
    }

    let nx = args.x.steps;
    let ny = args.y.steps;
    // Row-major with x outer, matching the CSV emission order. Indexed
    // parallel collect keeps the ordering deterministic regardless of the
    // thread count.
    let cells: Vec<Cell> = with_thread_cap(|| {
        (0..nx * ny)
            .into_par_iter()
            .map(|idx| {
                let ix = idx / ny;
                let iy = idx % ny;
                let mut p = ProblemParams::new(0.0, 0.0, 0.0);
                assign(&mut p, args.fix.name, args.fix.value);
                assign(&mut p, args.x.name, args.x.value_at(ix));
                assign(&mut p, args.y.name, args.y.value_at(iy));
                let report = classify(p);
                Cell {
                    class: report.class,
                    delta1_bound: report.delta1_bound,
                    frontier_min_distance: report.frontier_distances.min_abs(),
                }
            })
            .collect()
    })?;

    if let Some(svg_path) = &args.svg {
        let classes: Vec<SignClass> = cells.iter().map(|c| c.class).collect();
        let svg = output::render_svg(
            nx,
            ny,
            &classes,
            args.x.name.as_str(),
            args.y.name.as_str(),
        );
        fs::write(svg_path, svg)?;
    }

    let text = if json {
        let report = ScanOut {
            command: "scan",
            x: axis_out(&args.x),
            y: axis_out(&args.y),
            fix: FixOut {
                name: args.fix.name.as_str(),
                value: args.fix.value,
            },
            cells: (0..nx * ny)
                .map(|idx| {
                    let c = &cells[idx];
                    CellOut {
                        x: args.x.value_at(idx / ny),
                        y: args.y.value_at(idx % ny),
                        class: c.class.as_str(),
                        delta1_bound: c.delta1_bound,
                        frontier_min_distance: c.frontier_min_distance,
                    }
                })
                .collect(),
        };
        output::to_json(&report)
    } else {
        render_csv(args, &cells)
    };
    output::write_primary(out, &text)?;
    Ok(0)
}

fn check_axis(axis: &AxisSpec) -> Result<(), CliError> {
    if axis.steps < 2 {
        return Err(CliError::Usage(format!(
            "degenerate axis: {} needs at least 2 steps, got {}",
            axis.name, axis.steps
        )));
    }
    Ok(())
}

fn assign(p: &mut ProblemParams, name: ParamName, value: f64) {
    match name {
        ParamName::M => p.m = value,
        ParamName::Delta1 => p.delta1 = value,
        ParamName::Delta2 => p.delta2 = value,
    }
}

fn axis_out(axis: &AxisSpec) -> AxisOut {
    AxisOut {
        name: axis.name.as_str(),
        lo: axis.lo,
        hi: axis.hi,
        steps: axis.steps,
    }
}

/// Honors `GREEN_THREADS` by running the closure inside a bespoke rayon
/// pool of that size; otherwise the global pool (hardware concurrency).
fn with_thread_cap<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match std::env::var("GREEN_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        Some(threads) if threads >= 1 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| CliError::Io(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
        _ => Ok(f()),
    }
}

fn render_csv(args: &ScanArgs, cells: &[Cell]) -> String {
    let ny = args.y.steps;
    let mut s = String::with_capacity(cells.len() * 48);
    s.push_str(&format!(
        "# x = {}:{}:{}:{}\n",
        args.x.name,
        fmt_f64(args.x.lo),
        fmt_f64(args.x.hi),
        args.x.steps
    ));
    s.push_str(&format!(
        "# y = {}:{}:{}:{}\n",
        args.y.name,
        fmt_f64(args.y.lo),
        fmt_f64(args.y.hi),
        args.y.steps
    ));
    s.push_str(&format!(
        "# fix = {}={}\n",
        args.fix.name,
        fmt_f64(args.fix.value)
    ));
    s.push_str("x,y,class,delta1_bound,frontier_min_distance\n");
    for (idx, cell) in cells.iter().enumerate() {
        let x = args.x.value_at(idx / ny);
        let y = args.y.value_at(idx % ny);
        let dist = match cell.frontier_min_distance {
            Some(d) => fmt_f64(d),
            None => String::new(),
        };
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_f64(x),
            fmt_f64(y),
            cell.class.as_str(),
            fmt_f64(cell.delta1_bound),
            dist
        ));
    }
    s
}
