//! Command-level failures and the exit-code contract.
//!
//! | exit | meaning                                             |
//! |------|-----------------------------------------------------|
//! | 0    | success                                             |
//! | 1    | usage, parse, or I/O failure                        |
//! | 2    | parameters are resonant (no unique Green's function)|
//! | 3    | analytic and empirical classifications disagree     |
//! | 4    | `verify` found a failed invariant                   |
//!
//! Exits 3 and 4 are not represented here: `classify` and `verify` print
//! their full report first and then return the code directly, so a single
//! well-formed document still reaches stdout in `--json` mode. `CliError`
//! covers only failures that preempt the primary output.

use std::fmt;

use greensign_core::{EvalError, SolvabilityError, SolveError};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Resonant(String),
    Sigma(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Sigma(_) | CliError::Io(_) => 1,
            CliError::Resonant(_) => 2,
        }
    }

    /// Stable machine-readable tag used in the JSON error object.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Resonant(_) => "resonance",
            CliError::Sigma(_) => "sigma",
            CliError::Io(_) => "io",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m)
            | CliError::Resonant(m)
            | CliError::Sigma(m)
            | CliError::Io(m) => m,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.message())
    }
}

impl From<SolvabilityError> for CliError {
    fn from(e: SolvabilityError) -> Self {
        CliError::Resonant(e.to_string())
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::NotSolvable(inner) => CliError::Resonant(inner.to_string()),
            SolveError::IllConditioned { .. } => CliError::Resonant(e.to_string()),
            SolveError::Sigma(inner) => CliError::Sigma(inner.to_string()),
            SolveError::InvalidGrid { .. } => CliError::Usage(e.to_string()),
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        CliError::Sigma(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_contract() {
        assert_eq!(CliError::Usage(String::new()).exit_code(), 1);
        assert_eq!(CliError::Sigma(String::new()).exit_code(), 1);
        assert_eq!(CliError::Io(String::new()).exit_code(), 1);
        assert_eq!(CliError::Resonant(String::new()).exit_code(), 2);
    }

    #[test]
    fn solve_errors_map_to_the_right_exits() {
        let resonant = SolveError::NotSolvable(SolvabilityError::DeltaTwoEqualsM {
            m: 1.0,
            delta2: 1.0,
        });
        assert_eq!(CliError::from(resonant).exit_code(), 2);
        let ill = SolveError::IllConditioned { estimate: 1e12 };
        assert_eq!(CliError::from(ill).exit_code(), 2);
        let grid = SolveError::InvalidGrid { what: "n too small" };
        assert_eq!(CliError::from(grid).exit_code(), 1);
    }
}
