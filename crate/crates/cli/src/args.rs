use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use weyl_core::verify::Suite;
use weyl_core::Mode;

#[derive(Debug, Parser)]
#[command(name = "weylbench", version, about = "Curvature decompositions and identity checks for Weyl structures")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Dimensions: `4`, `3..6` or `3,5`.
    #[arg(long, global = true)]
    pub n: Option<String>,
    /// Signature `p,q` (number of negative and positive entries of h).
    #[arg(long, global = true)]
    pub signature: Option<String>,
    #[arg(long, global = true, default_value = "float")]
    pub mode: Mode,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 100)]
    pub count: usize,
    /// Relative tolerance of float-mode checks.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub out: Option<OutFormat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Json,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decompose a rank-4 tensor document into its irreducible components.
    Decompose { file: PathBuf },
    /// Run a seeded identity battery.
    Verify {
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
    },
    /// Compare computed module dimensions with their closed forms.
    Dims,
    #[command(subcommand)]
    Chart(ChartCommand),
}

#[derive(Debug, Subcommand)]
pub enum ChartCommand {
    /// Check realization, Bianchi identities and scalar relations at random points.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 20)]
        points: usize,
    },
    /// Integrate the scalar-curvature identities over the chart domain.
    Integrate {
        file: PathBuf,
        #[arg(long, default_value_t = 12)]
        res: usize,
    },
    /// Apply the gauge transformation `(e^{2f} g, φ − df)` and print the new chart.
    Gauge {
        file: PathBuf,
        #[arg(long = "f")]
        f: String,
    },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse()
}
