//! `ffincidence` command-line interface.
//!
//! Exit codes: 0 when every assertion holds, 1 on any mathematical mismatch,
//! 2 on usage or configuration errors.

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

pub mod commands;
pub mod matrix;
pub mod output;

use commands::{DistanceArgs, GaussArgs, IncidenceArgs, MixingArgs, Outcome, SpectrumArgs, SumprodArgs};
use output::{Envelope, Format};

#[derive(Debug, Parser)]
#[command(name = "ffincidence", version, about = "Exact finite-field incidence and spectrum verification")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (defaults to all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Gauss sums and the completed square over GF(p^ell)
    Gauss(GaussArgs),
    /// Closed-form eigenvalues against a full character-sum sweep
    Spectrum(SpectrumArgs),
    /// Mixing bound on random vertex sets
    Mixing(MixingArgs),
    /// Point-sphere incidence bounds on random instances
    Incidence(IncidenceArgs),
    /// Pairs at a fixed distance on random point sets
    Distance(DistanceArgs),
    /// Sum-product statistics on random sets
    Sumprod(SumprodArgs),
    /// Every verification campaign, cells over budget skipped
    VerifyAll(VerifyAllArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyAllArgs {
    /// Largest estimated cost (elementary operations) of a single cell
    #[arg(long, default_value_t = matrix::DEFAULT_BUDGET)]
    pub budget: u64,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Gauss(_) => "gauss",
            Command::Spectrum(_) => "spectrum",
            Command::Mixing(_) => "mixing",
            Command::Incidence(_) => "incidence",
            Command::Distance(_) => "distance",
            Command::Sumprod(_) => "sumprod",
            Command::VerifyAll(_) => "verify-all",
        }
    }

    fn params(&self) -> serde_json::Value {
        match self {
            Command::Gauss(a) => output::to_value(a),
            Command::Spectrum(a) => output::to_value(a),
            Command::Mixing(a) => output::to_value(a),
            Command::Incidence(a) => output::to_value(a),
            Command::Distance(a) => output::to_value(a),
            Command::Sumprod(a) => output::to_value(a),
            Command::VerifyAll(a) => output::to_value(a),
        }
    }
}

/// Failure-injection switches for exercising the exit-code contract.
#[derive(Debug, Clone, Copy, Default)]
pub struct Hooks {
    /// Perturb the closed-form eigenvalue at the origin in every spectrum sweep.
    pub corrupt_eigenvalue: bool,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(ffincidence::Error),
    Io(std::io::Error),
    Csv(csv::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::Csv(e) => write!(f, "csv error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ffincidence::Error> for CliError {
    fn from(e: ffincidence::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Csv(e)
    }
}

fn dispatch(command: &Command, hooks: Hooks) -> Result<Outcome, CliError> {
    match command {
        Command::Gauss(a) => commands::gauss(a),
        Command::Spectrum(a) => commands::spectrum(a, hooks),
        Command::Mixing(a) => commands::mixing(a),
        Command::Incidence(a) => commands::incidence(a),
        Command::Distance(a) => commands::distance(a),
        Command::Sumprod(a) => commands::sumprod(a),
        Command::VerifyAll(a) => matrix::verify_all(a.budget, hooks),
    }
}

/// Runs the parsed command, on a dedicated pool when `--threads` is given.
pub fn execute(cli: &Cli, hooks: Hooks) -> Result<Envelope, CliError> {
    let start = Instant::now();
    let outcome = match cli.threads {
        Some(0) => return Err(CliError::Usage("--threads must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?
            .install(|| dispatch(&cli.command, hooks))?,
        None => dispatch(&cli.command, hooks)?,
    };
    Ok(Envelope {
        command: cli.command.name().to_string(),
        params: cli.command.params(),
        results: outcome.results,
        mismatches: outcome.mismatches,
        assertions: outcome.assertions,
        elapsed_ms: start.elapsed().as_millis() as u64,
        seed: outcome.seed,
        version: env!("CARGO_PKG_VERSION").to_string(),
    })
}

pub fn render(env: &Envelope, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => Ok(output::render_json(env)),
        Format::Csv => Ok(output::render_csv(env)?),
    }
}

/// Parses, runs and renders without writing anything; returns the exit code and report text.
pub fn run_captured<I, T>(argv: I, hooks: Hooks) -> Result<(i32, String), CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| CliError::Usage(e.to_string()))?;
    let env = execute(&cli, hooks)?;
    Ok((env.exit_code(), render(&env, cli.format)?))
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, Hooks::default())
}

pub fn run_with<I, T>(argv: I, hooks: Hooks) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = execute(&cli, hooks).and_then(|env| {
        let text = render(&env, cli.format)?;
        match &cli.out {
            Some(path) => std::fs::write(path, text)?,
            None => print!("{text}"),
        }
        Ok(env.exit_code())
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
