//! Experiment driver for the muntz library. Subcommands read a flat
//! `key=value` config, run one pipeline, and write a deterministic CSV
//! with a metadata comment block. Exit codes: 0 success, 1 rejected
//! input, 2 numerical failure.

mod config;
mod output;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "muntz", about = "Config-driven numerics pipelines with CSV output")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
    /// Experiment config file (flat key=value lines, `#` comments)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides the seed from the config
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Overrides output_path from the config
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for per-item fan-out (0 = automatic)
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
pub enum Cmd {
    /// Validate an exponent spec and tabulate the materialized set
    Validate,
    /// Monomial L_p norms: closed form against quadrature
    Norms,
    /// Decay-rate table for the difference function of a seeded polynomial
    Rates,
    /// Fractional trigonometric derivative of a seeded polynomial
    Weil,
    /// One-flip substitution chain with per-step bounds
    Perturb,
    /// Candidate generation, exclusion to step form, and section diagnostics
    Basis,
    /// Substitution-operator contraction ratio against its analytic bound
    Isocheck,
}

impl Cmd {
    pub fn name(self) -> &'static str {
        match self {
            Cmd::Validate => "validate",
            Cmd::Norms => "norms",
            Cmd::Rates => "rates",
            Cmd::Weil => "weil",
            Cmd::Perturb => "perturb",
            Cmd::Basis => "basis",
            Cmd::Isocheck => "isocheck",
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run::dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
