//! Command-line surface: subcommands, flags, and the scan axis
//! mini-language.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "greensign",
    version,
    about = "Green's function evaluation, sign-region classification, and \
             numerical cross-checks for a periodic problem with integral \
             boundary conditions"
)]
pub struct Cli {
    /// Emit machine-readable JSON instead of text
    #[arg(long, global = true)]
    pub json: bool,

    /// Seed for the randomized parts of `verify`
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Write the primary output to a file instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate the kernel G(t, s) at one point
    Eval(EvalArgs),
    /// Classify (M, delta1, delta2) into sign regions
    Classify(ClassifyArgs),
    /// Solve u'' + M u = sigma with the integral boundary conditions
    Solve(SolveArgs),
    /// Classify a 2D slice of parameter space into a CSV (and optional SVG)
    Scan(ScanArgs),
    /// Run the built-in invariant suite
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct ProblemFlags {
    /// Coefficient M of the zeroth-order term
    #[arg(long = "M", allow_hyphen_values = true, value_name = "REAL")]
    pub m: f64,

    /// Weight of the integral term in the value boundary condition
    #[arg(long, allow_hyphen_values = true, value_name = "REAL")]
    pub d1: f64,

    /// Weight of the integral term in the slope boundary condition
    #[arg(long, allow_hyphen_values = true, value_name = "REAL")]
    pub d2: f64,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    pub problem: ProblemFlags,

    /// Evaluation point t
    #[arg(long, value_name = "REAL")]
    pub t: f64,

    /// Evaluation point s
    #[arg(long, value_name = "REAL")]
    pub s: f64,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub problem: ProblemFlags,

    /// Also run the grid-based empirical classifier and compare
    #[arg(long)]
    pub empirical: bool,

    /// Base grid resolution for the empirical classifier
    #[arg(long = "grid-n", default_value_t = 201, value_name = "N")]
    pub grid_n: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Quadrature of the closed-form kernel
    Green,
    /// Kernel-free finite differences
    Fd,
    /// Both, with a per-point difference column
    Both,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemFlags,

    /// Forcing term as an expression in t, e.g. "sin(2*pi*t)"
    #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
    pub sigma: String,

    #[arg(long, value_enum, default_value_t = Method::Green)]
    pub method: Method,

    /// Grid intervals (also the quadrature panel count; must be even)
    #[arg(long, default_value_t = 256, value_name = "N")]
    pub n: usize,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    /// Horizontal axis, e.g. "M:-20:15:351"
    #[arg(long, value_name = "NAME:LO:HI:STEPS")]
    pub x: AxisSpec,

    /// Vertical axis, e.g. "delta2:-20:15:351"
    #[arg(long, value_name = "NAME:LO:HI:STEPS")]
    pub y: AxisSpec,

    /// The remaining parameter, e.g. "delta1=0"
    #[arg(long, value_name = "NAME=VALUE")]
    pub fix: FixSpec,

    /// Also paint the class map as an SVG
    #[arg(long, value_name = "PATH")]
    pub svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Halve grid sizes and case counts
    #[arg(long)]
    pub fast: bool,
}

/// One of the three problem parameters, as named on the scan axes.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ParamName {
    M,
    Delta1,
    Delta2,
}

impl ParamName {
    pub fn as_str(self) -> &'static str {
        match self {
            ParamName::M => "M",
            ParamName::Delta1 => "delta1",
            ParamName::Delta2 => "delta2",
        }
    }
}

impl FromStr for ParamName {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "M" => Ok(ParamName::M),
            "delta1" => Ok(ParamName::Delta1),
            "delta2" => Ok(ParamName::Delta2),
            other => Err(format!(
                "unknown parameter {other:?} (expected M, delta1 or delta2)"
            )),
        }
    }
}

impl fmt::Display for ParamName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `name:lo:hi:steps` — a uniformly sampled closed interval.
#[derive(Clone, Debug, PartialEq)]
pub struct AxisSpec {
    pub name: ParamName,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

impl AxisSpec {
    /// Sample `i` of `steps` equally spaced points, endpoints included.
    ///
    /// Computed as the affine combination `(lo*(n-1-i) + hi*i)/(n-1)`
    /// rather than `lo + span*frac`: every step commutes with a sign flip
    /// under round-to-nearest, so a symmetric axis (`hi == -lo`) samples
    /// exactly mirrored values and scan mirror symmetry holds bitwise.
    pub fn value_at(&self, i: usize) -> f64 {
        if self.steps < 2 {
            return self.lo;
        }
        let den = (self.steps - 1) as f64;
        (self.lo * ((self.steps - 1 - i) as f64) + self.hi * (i as f64)) / den
    }
}

impl FromStr for AxisSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return Err(format!(
                "axis spec {s:?} must have the form name:lo:hi:steps"
            ));
        }
        let name: ParamName = parts[0].parse()?;
        let lo: f64 = parts[1]
            .parse()
            .map_err(|_| format!("axis {name}: bad lower bound {:?}", parts[1]))?;
        let hi: f64 = parts[2]
            .parse()
            .map_err(|_| format!("axis {name}: bad upper bound {:?}", parts[2]))?;
        let steps: usize = parts[3]
            .parse()
            .map_err(|_| format!("axis {name}: bad step count {:?}", parts[3]))?;
        if !lo.is_finite() || !hi.is_finite() {
            return Err(format!("axis {name}: bounds must be finite"));
        }
        if hi <= lo {
            return Err(format!("axis {name}: upper bound must exceed lower bound"));
        }
        Ok(AxisSpec { name, lo, hi, steps })
    }
}

/// `name=value` — the held-fixed third parameter of a scan.
#[derive(Clone, Debug, PartialEq)]
pub struct FixSpec {
    pub name: ParamName,
    pub value: f64,
}

impl FromStr for FixSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, value) = s
            .split_once('=')
            .ok_or_else(|| format!("fix spec {s:?} must have the form name=value"))?;
        let name: ParamName = name.parse()?;
        let value: f64 = value
            .parse()
            .map_err(|_| format!("fix {name}: bad value {value:?}"))?;
        if !value.is_finite() {
            return Err(format!("fix {name}: value must be finite"));
        }
        Ok(FixSpec { name, value })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_specs_parse_and_sample() {
        let axis: AxisSpec = "M:-20:15:351".parse().unwrap();
        assert_eq!(axis.name, ParamName::M);
        assert_eq!(axis.steps, 351);
        assert_eq!(axis.value_at(0), -20.0);
        assert_eq!(axis.value_at(350), 15.0);

        let axis: AxisSpec = "delta2:-1:1:3".parse().unwrap();
        assert_eq!(axis.value_at(1), 0.0);
    }

    #[test]
    fn symmetric_axes_sample_exactly_mirrored_values() {
        let axis: AxisSpec = "delta1:-4:4:351".parse().unwrap();
        for i in 0..351 {
            let a = axis.value_at(i);
            let b = -axis.value_at(350 - i);
            if a == 0.0 {
                // the midpoint itself: +0.0, whose negation is -0.0
                assert!(b == 0.0, "i = {i}");
            } else {
                assert_eq!(a.to_bits(), b.to_bits(), "i = {i}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn malformed_axis_specs_are_rejected() {
        assert!("M:-20:15".parse::<AxisSpec>().is_err());
        assert!("mu:-20:15:351".parse::<AxisSpec>().is_err());
        assert!("M:x:15:351".parse::<AxisSpec>().is_err());
        assert!("M:15:-20:351".parse::<AxisSpec>().is_err());
        assert!("delta1=0".parse::<AxisSpec>().is_err());
    }

    #[test]
    fn fix_specs_parse() {
        let fix: FixSpec = "delta1=0".parse().unwrap();
        assert_eq!(fix.name, ParamName::Delta1);
        assert_eq!(fix.value, 0.0);
        assert!("delta1:0".parse::<FixSpec>().is_err());
        assert!("delta1=abc".parse::<FixSpec>().is_err());
    }
}
