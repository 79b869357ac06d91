//! Serialization: JSON output shapes (kept in sync with
//! `schema/greensign.schema.json`), CSV number formatting, and the minimal
//! SVG class-map painter.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use greensign_core::{ProblemParams, SignClass};

/// Shortest round-trip decimal form; identical across platforms, never more
/// than 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

/// Primary-output sink: `--out PATH` or stdout.
pub fn write_primary(out: Option<&Path>, content: &str) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, content),
        None => io::stdout().write_all(content.as_bytes()),
    }
}

pub fn to_json(value: &impl Serialize) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("output structs serialize");
    text.push('\n');
    text
}

#[derive(Serialize)]
pub struct ParamsOut {
    pub m: f64,
    pub delta1: f64,
    pub delta2: f64,
}

impl From<ProblemParams> for ParamsOut {
    fn from(p: ProblemParams) -> Self {
        ParamsOut {
            m: p.m,
            delta1: p.delta1,
            delta2: p.delta2,
        }
    }
}

#[derive(Serialize)]
pub struct EvalOut {
    pub command: &'static str,
    pub params: ParamsOut,
    pub t: f64,
    pub s: f64,
    pub value: f64,
    pub dt_left: f64,
    pub dt_right: f64,
    pub branch: &'static str,
    pub solvable: bool,
}

#[derive(Serialize)]
pub struct DistancesOut {
    pub to_g: Option<f64>,
    pub to_f: Option<f64>,
    pub to_k: Option<f64>,
    pub to_delta1_bound: Option<f64>,
}

#[derive(Serialize)]
pub struct EmpiricalOut {
    pub class: &'static str,
    pub min: f64,
    pub max: f64,
    pub tol: f64,
    pub samples: usize,
    /// `None` when the analytic side makes no sign claim to compare with.
    pub agrees_with_analytic: Option<bool>,
}

#[derive(Serialize)]
pub struct ClassifyOut {
    pub command: &'static str,
    pub params: ParamsOut,
    pub class: &'static str,
    pub delta1_bound: f64,
    pub frontier_distances: DistancesOut,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub empirical: Option<EmpiricalOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub empirical_note: Option<String>,
}

#[derive(Serialize)]
pub struct MethodOut {
    pub method: &'static str,
    pub u: Vec<f64>,
    pub bc_residuals: [f64; 2],
    pub ode_residual_max: f64,
    pub condition_estimate: Option<f64>,
}

#[derive(Serialize)]
pub struct SolveOut {
    pub command: &'static str,
    pub params: ParamsOut,
    pub sigma: String,
    pub n: usize,
    pub grid: Vec<f64>,
    pub results: Vec<MethodOut>,
    pub max_abs_diff: Option<f64>,
}

#[derive(Serialize)]
pub struct AxisOut {
    pub name: &'static str,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

#[derive(Serialize)]
pub struct FixOut {
    pub name: &'static str,
    pub value: f64,
}

#[derive(Serialize)]
pub struct CellOut {
    pub x: f64,
    pub y: f64,
    pub class: &'static str,
    pub delta1_bound: f64,
    pub frontier_min_distance: Option<f64>,
}

#[derive(Serialize)]
pub struct ScanOut {
    pub command: &'static str,
    pub x: AxisOut,
    pub y: AxisOut,
    pub fix: FixOut,
    pub cells: Vec<CellOut>,
}

#[derive(Serialize)]
pub struct CheckOut {
    pub name: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Serialize)]
pub struct VerifyOut {
    pub command: &'static str,
    pub seed: u64,
    pub fast: bool,
    pub checks: Vec<CheckOut>,
    pub passed: bool,
}

#[derive(Serialize)]
pub struct ErrorBody {
    pub kind: &'static str,
    pub message: String,
    pub exit: i32,
}

#[derive(Serialize)]
pub struct ErrorOut {
    pub error: ErrorBody,
}

/// Fill color per sign class. Five colors: the three main verdicts, one
/// shared "boundary" black for frontier/degenerate/outside, and gold for
/// resonant cells.
pub fn class_color(class: SignClass) -> &'static str {
    match class {
        SignClass::StrictlyPositive => "#3b6fd4",
        SignClass::StrictlyNegative => "#d43b3b",
        SignClass::SignChanging => "#d9d9d9",
        SignClass::OnFrontier
        | SignClass::DegenerateNonNegative
        | SignClass::OutsideTheory => "#111111",
        SignClass::NotUniquelySolvable => "#e0a500",
    }
}

const LEGEND: [(&str, &str); 5] = [
    ("#3b6fd4", "strictly positive"),
    ("#d43b3b", "strictly negative"),
    ("#d9d9d9", "sign changing"),
    ("#111111", "frontier / degenerate / outside theory"),
    ("#e0a500", "not uniquely solvable"),
];

/// Paints one rect per scan cell, y increasing upward, plus a legend.
/// Cells are supplied row-major with `x` outer and `y` inner, matching the
/// CSV emission order.
pub fn render_svg(
    nx: usize,
    ny: usize,
    classes: &[SignClass],
    x_label: &str,
    y_label: &str,
) -> String {
    assert_eq!(classes.len(), nx * ny);
    let cell = 2usize;
    let margin = 24usize;
    let legend_h = 110usize;
    let width = nx * cell + 2 * margin;
    let height = ny * cell + 2 * margin + legend_h;

    let mut svg = String::with_capacity(classes.len() * 64);
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
         width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">\n"
    ));
    svg.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{width}\" height=\"{height}\" \
         fill=\"#ffffff\"/>\n"
    ));
    for ix in 0..nx {
        for iy in 0..ny {
            let color = class_color(classes[ix * ny + iy]);
            let px = margin + ix * cell;
            let py = margin + (ny - 1 - iy) * cell;
            svg.push_str(&format!(
                "  <rect x=\"{px}\" y=\"{py}\" width=\"{cell}\" \
                 height=\"{cell}\" fill=\"{color}\"/>\n"
            ));
        }
    }
    // axis labels under the map
    let label_y = margin + ny * cell + 16;
    svg.push_str(&format!(
        "  <text x=\"{}\" y=\"{label_y}\" font-family=\"monospace\" \
         font-size=\"12\">x: {x_label}   y: {y_label}</text>\n",
        margin
    ));
    // legend
    let mut ly = label_y + 18;
    for (color, text) in LEGEND {
        svg.push_str(&format!(
            "  <rect x=\"{margin}\" y=\"{}\" width=\"12\" height=\"12\" \
             fill=\"{color}\"/>\n",
            ly - 10
        ));
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{ly}\" font-family=\"monospace\" \
             font-size=\"12\">{text}</text>\n",
            margin + 18
        ));
        ly += 18;
    }
    svg.push_str("</svg>\n");
    svg
}
