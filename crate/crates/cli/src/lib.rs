//! Command-line front end: resolves a run configuration and writes CSV.
//!
//! Exit codes: 0 success, 1 configuration error, 2 numerical failure,
//! 3 small-cavity regime violated.

pub mod commands;
pub mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use dressed_atom::Error;

pub use commands::run;
pub use config::{RawConfig, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Core(e) => match e {
                Error::InvalidScenario(_) | Error::EmptySpectrum | Error::TruncationMismatch(_) => {
                    1
                }
                Error::RegimeViolation(_) => 3,
                _ => 2,
            },
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "dressed-atom",
    version,
    about = "Dressed atom in a spherical cavity at finite temperature"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Flat `key = value` configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Named base configuration (fig2, fig3, fig4).
    #[arg(long, global = true)]
    pub preset: Option<String>,
    /// Override one key, `key=value`; repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for the parallel sections.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Report the small-cavity regime conditions.
    Validate,
    /// Normal-mode frequencies and shifts.
    Spectrum {
        /// Append the t₀ᵏ and t_k⁰ coupling columns.
        #[arg(long)]
        with_couplings: bool,
    },
    /// Occupation number of the atom over time.
    Evolve,
    /// Lower bound on the occupation over a temperature list.
    Bound,
    /// Bound over a radius × temperature grid.
    Sweep,
}

impl Cli {
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut raw = match &self.preset {
            Some(name) => RawConfig::from_preset(name)?,
            None => RawConfig::default(),
        };
        if let Some(path) = &self.config {
            raw.merge_file(path)?;
        }
        for assignment in &self.set {
            raw.merge_assignment(assignment)?;
        }
        raw.resolve()
    }

    fn execute(&self) -> Result<i32, CliError> {
        let config = self.resolve()?;
        let output = match self.threads {
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Config(format!("thread pool: {e}")))?
                .install(|| run(self.command, &config))?,
            None => run(self.command, &config)?,
        };
        match &self.out {
            Some(path) => std::fs::write(path, &output.text)?,
            None => std::io::stdout().lock().write_all(output.text.as_bytes())?,
        }
        Ok(output.exit_code)
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match cli.execute() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
