//! Command-line front end for `charp-core`: an expression language for
//! functions and differential forms, and one subcommand per library
//! operation.

pub mod args;
pub mod commands;
pub mod expr;

use std::ffi::OsString;
use std::io::Read;

use clap::Parser;
use serde_json::{json, Value as Json};

use charp_core::poly::Ring;

use args::{Cli, Command};
use commands::{CliError, Context, Report, EXIT_INPUT, EXIT_OK};

/// Largest characteristic accepted unless `CHARP_MAX_P` says otherwise.
pub const DEFAULT_MAX_P: u32 = 31;

/// Exit code and rendered streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn max_p() -> Result<u32, CliError> {
    match std::env::var("CHARP_MAX_P") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("CHARP_MAX_P='{v}' is not an integer"))),
        Err(_) => Ok(DEFAULT_MAX_P),
    }
}

fn ring(cli: &Cli) -> Result<Ring, CliError> {
    let cap = max_p()?;
    if cli.p > cap {
        return Err(CliError::Input(format!(
            "p = {} exceeds the cap {cap}; raise CHARP_MAX_P to allow it",
            cli.p
        )));
    }
    Ring::new(cli.p, cli.nvars).map_err(|e| CliError::Input(e.to_string()))
}

fn command_name(cmd: &Command) -> String {
    let name = match cmd {
        Command::Eval(_) => "eval",
        Command::D(_) => "d",
        Command::Partial { .. } => "partial",
        Command::Divexact { .. } => "divexact",
        Command::Dlog(_) => "dlog",
        Command::Closed(_) => "closed",
        Command::Pbasis(_) => "pbasis",
        Command::Proot(_) => "proot",
        Command::Cartier { .. } => "cartier",
        Command::Gamma(_) => "gamma",
        Command::Antider(_) => "antider",
        Command::Logwitness { .. } => "logwitness",
        Command::Mc { .. } => "mc",
        Command::Curv(_) => "curv",
        Command::PcurvBrute(_) => "pcurv-brute",
        Command::PcurvAt { .. } => "pcurv-at",
        Command::PcurvAbelian { .. } => "pcurv-abelian",
        Command::PcurvOracle(_) => "pcurv-oracle",
        Command::Dpow { .. } => "dpow",
        Command::Classify { group, .. } => {
            return format!(
                "classify {}",
                match group {
                    args::Group::MuP => "mu_p",
                    args::Group::AlphaP => "alpha_p",
                    args::Group::Aff1 => "aff1",
                }
            )
        }
        Command::Boundary { .. } => "boundary",
        Command::Cocycle { .. } => "cocycle",
        Command::Crosscheck { .. } => "crosscheck",
    };
    name.to_string()
}

fn document(cli: &Cli, report: &Report, error: Option<&CliError>) -> Json {
    let mut doc = json!({
        "schema": 1,
        "command": command_name(&cli.command),
        "p": cli.p,
        "nvars": cli.nvars,
        "inputs": report.inputs,
        "result": report.result,
        "certificates": report.certificates,
        "witnesses": report.witnesses,
        "reason": report.reason,
    });
    if let Some(e) = error {
        doc["error"] = json!({"kind": e.kind(), "message": e.to_string()});
    }
    doc
}

/// Runs one command line. `stdin` is consulted only under `--stdin`.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
            };
        }
    };
    let (report, error) = match ring(&cli) {
        Err(e) => (Report::default(), Some(e)),
        Ok(ring) => {
            let mut ctx = Context::new(ring, if cli.stdin { Some(stdin) } else { None });
            let res = commands::execute(&mut ctx, &cli.command);
            (ctx.into_report(), res.err())
        }
    };
    let code = error.as_ref().map_or(report.code, CliError::exit_code);
    let mut stderr = String::new();
    if let Some(e) = &error {
        stderr = format!("error: {e}\n");
    }
    let stdout = if cli.json {
        let mut s = serde_json::to_string_pretty(&document(&cli, &report, error.as_ref()))
            .expect("json values serialize");
        s.push('\n');
        s
    } else {
        report.lines.iter().map(|l| format!("{l}\n")).collect()
    };
    Outcome { code, stdout, stderr }
}
