//! `forge`: JSON in, JSON out front end for forge-core.
//!
//! Exit codes: 0 success, 1 usage or malformed input, 2 a precondition or
//! validation failure (structured error on stdout), 3 a search or term
//! budget ran out (best-found result still emitted when there is one).

mod commands;
mod report;
mod schema;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

#[derive(Parser, Debug)]
#[command(name = "forge", version, about = "Weighted Dirichlet-series algebras, rational cones and multiplicative functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalOpts,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Print the input and output JSON schema of the subcommand and exit.
    #[arg(long, global = true)]
    pub schema: bool,
    /// Render a plain-text report instead of JSON.
    #[arg(long, global = true)]
    pub report: bool,
    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Seed for randomized searches.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Convolution of two elements.
    Convolve(commands::ConvolveArgs),
    /// Inverse by Neumann series or graded recursion.
    Invert(commands::InvertArgs),
    /// Evaluate the series at s with a tail bound.
    Eval(commands::EvalArgs),
    /// Grid search for min |ã(s)| over the closed right half-space.
    Witness(commands::WitnessArgs),
    /// Compose a power series with an element.
    Compose(commands::ComposeArgs),
    /// Decide 0 ∈ conv(E) or produce a separating functional.
    Separate(commands::VectorsArgs),
    /// Generators and lineality of the dual cone.
    Dual(commands::VectorsArgs),
    /// Extend a partial character to a basis of its span.
    ExtendCharacter(commands::ExtendArgs),
    /// Find s with ã(s) close to h_ψ(a).
    DensitySearch(commands::DensityArgs),
    /// Simultaneous phase alignment.
    Kronecker(commands::KroneckerArgs),
    /// Prime-local inverse of a multiplicative function.
    EulerInvert(commands::EulerInvertArgs),
    /// Local/global decomposition of a multiplicative function.
    P3Decompose(commands::P3Args),
    /// Check the admissibility conditions of a weight.
    CheckWeight(commands::CheckWeightArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Convolve(_) => "convolve",
            Command::Invert(_) => "invert",
            Command::Eval(_) => "eval",
            Command::Witness(_) => "witness",
            Command::Compose(_) => "compose",
            Command::Separate(_) => "separate",
            Command::Dual(_) => "dual",
            Command::ExtendCharacter(_) => "extend-character",
            Command::DensitySearch(_) => "density-search",
            Command::Kronecker(_) => "kronecker",
            Command::EulerInvert(_) => "euler-invert",
            Command::P3Decompose(_) => "p3-decompose",
            Command::CheckWeight(_) => "check-weight",
        }
    }
}

/// What a command produced.
pub enum Outcome {
    Done(Value),
    /// Best-found result of a search that ran out of budget.
    Exhausted(Value),
}

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input.
    Input(String),
    Precondition { kind: &'static str, message: String },
    Budget { kind: &'static str, message: String },
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Precondition { .. } => 2,
            CliError::Budget { .. } => 3,
        }
    }

    fn to_json(&self) -> Value {
        let (kind, message) = match self {
            CliError::Input(m) => ("input", m.as_str()),
            CliError::Precondition { kind, message } | CliError::Budget { kind, message } => (*kind, message.as_str()),
        };
        serde_json::json!({ "error": { "kind": kind, "message": message } })
    }
}

fn emit(value: &Value, opts: &GlobalOpts, name: &str) -> std::io::Result<()> {
    let text = if opts.report {
        report::render(name, value)
    } else {
        let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
        s.push('\n');
        s
    };
    match &opts.output {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let name = cli.command.name();
    if cli.global.schema {
        let s = serde_json::to_string_pretty(&schema::schema(name)).expect("schema serializes");
        println!("{s}");
        return ExitCode::SUCCESS;
    }
    let result = commands::run(&cli.command, &cli.global);
    let (value, code) = match result {
        Ok(Outcome::Done(v)) => (v, 0),
        Ok(Outcome::Exhausted(v)) => (v, 3),
        Err(CliError::Input(m)) => {
            eprintln!("forge {name}: {m}");
            return ExitCode::from(1);
        }
        Err(e) => (e.to_json(), e.code()),
    };
    if let Err(e) = emit(&value, &cli.global, name) {
        eprintln!("forge {name}: cannot write output: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
