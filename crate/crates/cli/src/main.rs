//! Command-line front end: reproducible experiments over the library.
//!
//! Every command is deterministic given its config and seed, and every
//! output embeds the full config that produced it — JSON reports carry a
//! `config` field, CSV files start with a `# config: {...}` comment — so a
//! result file can be reproduced byte-for-byte by re-running with
//! `--config` pointing at its embedded config.
//!
//! Exit codes: 0 success, 2 invalid config, 3 resource cap exceeded,
//! 4 bound target unattainable.

mod commands;
mod output;

use clap::{Parser, Subcommand};

use commands::{
    bound::BoundArgs, codecio::DecodeArgs, codecio::EncodeArgs, codecio::SourceEncodeArgs,
    construct::ConstructArgs, exponent::ExponentArgs, simulate::SimulateArgs,
    spectrum::SpectrumArgs,
};

#[derive(Parser)]
#[command(
    name = "polarlab",
    version,
    about = "Polar-code scaling workbench: exponents, bounds, spectra, codec runs"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Iterate the supremum functional and export rho series and ratio curves
    Exponent(ExponentArgs),
    /// Evaluate the explicit blocklength bounds (channel or source)
    Bound(BoundArgs),
    /// Monte Carlo channel/source runs and polarization-fraction counts
    Simulate(SimulateArgs),
    /// Export a Bhattacharyya spectrum or a sampled trajectory
    Spectrum(SpectrumArgs),
    /// Build a polar code and write it as a code file
    Construct(ConstructArgs),
    /// Encode a message with the channel-coding generator
    Encode(EncodeArgs),
    /// Successive-cancellation decode of received symbols
    Decode(DecodeArgs),
    /// Randomized successive-cancellation source encoding
    SourceEncode(SourceEncodeArgs),
}

/// Failure carrying its process exit code.
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<polarlab::Error> for Failure {
    fn from(e: polarlab::Error) -> Self {
        use polarlab::Error::*;
        let code = match &e {
            AlphabetCap { .. } | ResourceLimit(_) => 3,
            TargetUnattainable { .. } => 4,
            _ => 2,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::invalid(format!("io: {e}"))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::invalid(format!("json: {e}"))
    }
}

fn main() {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Exponent(args) => commands::exponent::run(args),
        Cmd::Bound(args) => commands::bound::run(args),
        Cmd::Simulate(args) => commands::simulate::run(args),
        Cmd::Spectrum(args) => commands::spectrum::run(args),
        Cmd::Construct(args) => commands::construct::run(args),
        Cmd::Encode(args) => commands::codecio::run_encode(args),
        Cmd::Decode(args) => commands::codecio::run_decode(args),
        Cmd::SourceEncode(args) => commands::codecio::run_source_encode(args),
    };
    if let Err(f) = result {
        eprintln!("error: {}", f.message);
        std::process::exit(f.code);
    }
}
