//! Library side of the `weylbench` command: every subcommand renders a
//! [`Report`] whose `passed` flag decides the exit status.

pub mod args;
mod chart_cmd;
mod decompose;
mod dims_cmd;
mod verify_cmd;

use std::path::Path;

use thiserror::Error;
use weyl_core::Model;

pub use args::{ChartCommand, Cli, Command, Common, OutFormat};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Core(#[from] weyl_core::Error),
    #[error(transparent)]
    Chart(#[from] weyl_chart::ChartError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Chart(e) if !is_input_error(e) => EXIT_FAIL,
            _ => EXIT_USAGE,
        }
    }
}

fn is_input_error(e: &weyl_chart::ChartError) -> bool {
    use weyl_chart::ChartError::*;
    matches!(e, Parse { .. } | Invalid(_) | Json(_) | Core(_))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub passed: bool,
    pub text: String,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let c = &cli.common;
    match &cli.command {
        Command::Decompose { file } => decompose::run(c, file),
        Command::Verify { suite } => verify_cmd::run(c, *suite),
        Command::Dims => dims_cmd::run(c),
        Command::Chart(cmd) => chart_cmd::run(c, cmd),
    }
}

pub(crate) fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

pub(crate) fn json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

/// Parses `4`, `3..6` (inclusive) or `3,5`.
pub fn parse_dims(s: &str) -> Result<Vec<usize>, CliError> {
    let bad = || CliError::Usage(format!("invalid --n `{s}`"));
    let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    let ns: Vec<usize> = if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
        if a > b {
            return Err(bad());
        }
        (a..=b).collect()
    } else {
        s.split(',').map(num).collect::<Result<_, _>>()?
    };
    if ns.is_empty() || ns.iter().any(|&n| n < 2) {
        return Err(bad());
    }
    Ok(ns)
}

pub fn parse_signature(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Usage(format!("invalid --signature `{s}` (expected p,q)"));
    let (p, q) = s.split_once(',').ok_or_else(bad)?;
    Ok((p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?))
}

/// Models selected by `--n` and `--signature`. Without `--signature` both
/// the Euclidean and the Lorentzian model of each dimension are used.
pub fn models(c: &Common, default_dims: &[usize]) -> Result<Vec<Model>, CliError> {
    let ns = match &c.n {
        Some(s) => parse_dims(s)?,
        None => default_dims.to_vec(),
    };
    let sig = c.signature.as_deref().map(parse_signature).transpose()?;
    let mut out = Vec::new();
    for n in ns {
        match sig {
            Some((p, q)) => {
                if p + q != n {
                    return Err(CliError::Usage(format!("signature {p},{q} does not add up to n = {n}")));
                }
                out.push(Model::new(n, p, q)?);
            }
            None => {
                out.push(Model::euclidean(n)?);
                out.push(Model::lorentzian(n)?);
            }
        }
    }
    Ok(out)
}
