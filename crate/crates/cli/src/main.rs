//! `greensign` — command-line front end for the Green's function library:
//! point evaluation, sign-region classification, two independent BVP
//! solvers, parameter-plane scans, and a self-contained invariant suite.

mod args;
mod classify;
mod error;
mod eval;
mod output;
mod scan;
mod solve;
mod verify;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use error::CliError;
use output::{ErrorBody, ErrorOut};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };

    let json = cli.json;
    let out = cli.out.as_deref();
    let result = match &cli.command {
        Command::Eval(a) => eval::run(a, json, out),
        Command::Classify(a) => classify::run(a, json, out),
        Command::Solve(a) => solve::run(a, json, out),
        Command::Scan(a) => scan::run(a, json, out),
        Command::Verify(a) => verify::run(a, cli.seed, json, out),
    };
    match result {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            report_failure(&err, json);
            std::process::exit(err.exit_code());
        }
    }
}

/// Failures that preempted the primary output: a JSON error object on
/// stdout in `--json` mode (so the stream still holds exactly one machine-
/// readable document), plain text on stderr otherwise.
fn report_failure(err: &CliError, json: bool) {
    if json {
        let body = ErrorOut {
            error: ErrorBody {
                kind: err.kind(),
                message: err.message().to_string(),
                exit: err.exit_code(),
            },
        };
        print!("{}", output::to_json(&body));
    } else {
        eprintln!("error: {err}");
    }
}
