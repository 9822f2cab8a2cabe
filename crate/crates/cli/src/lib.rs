//! Command-line front end for `subhardy`.
//!
//! Exit codes: 0 when every requested check holds, 1 on usage or input
//! errors, 2 when a mathematical verdict is false.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub mod commands;
pub mod input;
pub mod report;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_VERDICT: u8 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Library(#[from] subhardy::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Parser)]
#[command(name = "subhardy", version, about = "Analyze shift-invariant subspaces of weighted Hardy spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the hypotheses on a space and extract its generator.
    Analyze(AnalyzeArgs),
    /// Inspect the built-in spaces.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Check every built-in space against its expected facts.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["space", "input"])))]
pub struct AnalyzeArgs {
    /// Catalog entry name.
    #[arg(long)]
    pub space: Option<String>,
    /// Space description file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Coefficient window for catalog entries.
    #[arg(long, default_value_t = 64)]
    pub dim: usize,
    /// Largest power examined.
    #[arg(long, default_value_t = 8)]
    pub nmax: usize,
    /// Uniform numerical tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Required lower constant for condition (i).
    #[arg(long)]
    pub delta: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also treat the power bounds and Shimorin inequalities as requested checks.
    #[arg(long)]
    pub strict: bool,
    /// Human-readable summary instead of JSON.
    #[arg(long)]
    pub text: bool,
}

#[derive(Debug, Subcommand)]
pub enum CatalogAction {
    List,
    Show {
        name: String,
        #[arg(long)]
        dim: Option<usize>,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Only this entry.
    #[arg(long)]
    pub entry: Option<String>,
    #[arg(long)]
    pub json: bool,
}

/// Parse arguments, run, and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(rendered.as_bytes()) } else { out.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Analyze(a) => commands::analyze(&a, out),
        Command::Catalog { action } => commands::catalog(&action, out),
        Command::Verify(v) => commands::verify(&v, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}
