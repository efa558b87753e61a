//! `tpa`: verify and construct twisted partial actions from TOML workspace files.
//!
//! Exit codes: 0 every check passed, 1 a check failed, 2 bad input, 3 a capacity guard tripped.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};
use tpa_core::AxiomReport;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] tpa_core::Error),
    #[error("cannot write {0}: {1}")]
    Io(PathBuf, std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(tpa_core::Error::Capacity(_)) => 3,
            CliError::Core(tpa_core::Error::Refused(_)) => 1,
            _ => 2,
        }
    }
}

#[derive(Parser)]
#[command(name = "tpa", version, about = "Verify and construct twisted partial actions of finite groupoids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
pub(crate) struct Common {
    /// Workspace file.
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Largest groupoid accepted.
    #[arg(long)]
    pub max_arrows: Option<usize>,
    /// Seed for randomized corpora; never changes a verdict.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
pub(crate) enum Command {
    /// Check the twisted partial action axioms.
    VerifyAction(Common),
    /// Build the crossed product and emit its structure constants.
    CrossedProduct(Common),
    /// Check extension data and build the enveloping action.
    Globalize {
        #[command(flatten)]
        common: Common,
        /// Use the literal form of the extension cocycle condition.
        #[arg(long)]
        star_literal: bool,
        /// Also write the global action as a workspace file.
        #[arg(long)]
        emit: Option<PathBuf>,
        /// Read the extension data from this file instead of the input.
        #[arg(long)]
        extension: Option<PathBuf>,
    },
    /// Check the Morita context between the crossed products.
    MoritaCheck(Common),
    /// Build the Exel category of the groupoid.
    Exel(Common),
    /// Check a factor set or a partial projective representation.
    CocycleCheck(Common),
    /// Enumerate partial factor sets and their idempotents.
    Schur {
        #[command(flatten)]
        common: Common,
        /// Largest field accepted.
        #[arg(long, default_value_t = 5)]
        max_field: u64,
    },
    /// Check an action on a K-semigroup and build its crossed product.
    SemigroupAction {
        #[command(flatten)]
        common: Common,
        /// Include semigroup tables in the report.
        #[arg(long)]
        tables: bool,
    },
    /// Run the representation and action round trips.
    Roundtrip(Common),
}

/// Everything a command returns besides the checks it ran.
pub(crate) struct Outcome {
    pub reports: Vec<AxiomReport>,
    pub data: serde_json::Map<String, serde_json::Value>,
}

#[derive(Serialize)]
struct Report<'a> {
    command: &'a str,
    version: &'a str,
    input_digest: String,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    reports: &'a [AxiomReport],
    data: &'a serde_json::Map<String, serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    elapsed_ms: f64,
}

fn emit(report: &Report, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(report).expect("serializable")),
        Format::Text => {
            for r in report.reports {
                for c in &r.checks {
                    println!(
                        "{} {}: {} ({} evaluated)",
                        if c.passed() { "PASS" } else { "FAIL" },
                        r.subject,
                        c.name,
                        c.evaluated
                    );
                    for w in &c.witnesses {
                        println!("    at ({}) {}", w.tuple.join(", "), w.detail);
                    }
                }
            }
            if let Some(e) = &report.error {
                println!("ERROR {e}");
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, common) = match &cli.command {
        Command::VerifyAction(c) => ("verify-action", c),
        Command::CrossedProduct(c) => ("crossed-product", c),
        Command::Globalize { common, .. } => ("globalize", common),
        Command::MoritaCheck(c) => ("morita-check", c),
        Command::Exel(c) => ("exel", c),
        Command::CocycleCheck(c) => ("cocycle-check", c),
        Command::Schur { common, .. } => ("schur", common),
        Command::SemigroupAction { common, .. } => ("semigroup-action", common),
        Command::Roundtrip(c) => ("roundtrip", c),
    };
    let start = Instant::now();
    let bytes = match std::fs::read(&common.input) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("cannot read {}: {e}", common.input.display());
            return ExitCode::from(2);
        }
    };
    let digest = hex::encode(Sha256::digest(&bytes));
    let result = std::str::from_utf8(&bytes)
        .map_err(|_| CliError::Input("input is not UTF-8".into()))
        .and_then(input::WorkspaceFile::parse)
        .and_then(|file| commands::run(&cli.command, &file));
    let empty = serde_json::Map::new();
    let (outcome, error, code) = match &result {
        Ok(o) => {
            let ok = o.reports.iter().all(AxiomReport::passed);
            (Some(o), None, if ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("{e}");
            (None, Some(e.to_string()), e.exit_code())
        }
    };
    let report = Report {
        command: name,
        version: env!("CARGO_PKG_VERSION"),
        input_digest: digest,
        passed: code == 0,
        seed: common.seed,
        reports: outcome.map(|o| o.reports.as_slice()).unwrap_or(&[]),
        data: outcome.map(|o| &o.data).unwrap_or(&empty),
        error,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    emit(&report, common.format);
    ExitCode::from(code)
}
