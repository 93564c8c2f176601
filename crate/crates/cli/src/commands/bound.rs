//! `polarlab bound`: explicit blocklength reports.
//!
//! Channel mode needs `--gap` and `--pe`; source mode needs
//! `--target-redundancy` and `--rate`. The prefactor `alpha1` is either
//! given directly or assembled from `(rho1, rho, k_ref)` and the channel's
//! `Z` (or the base-function maximum when no channel is named, which
//! dominates every channel).

use clap::Args;
use serde::{Deserialize, Serialize};

use polarlab::bounds::{
    alpha1_constant, alpha1_sup, required_blocklength_channel, required_blocklength_source,
    BinaryHammingSource, BoundParams, SweepGrid,
};
use polarlab::exponent::{make_f0, ExponentResult};

use crate::commands::parse_channel;
use crate::output::{json_report, maybe_load_config, write_out};
use crate::Failure;

#[derive(Args, Serialize, Deserialize, Clone)]
#[serde(deny_unknown_fields)]
pub struct BoundArgs {
    /// Gap to capacity (channel mode)
    #[arg(long)]
    #[serde(default)]
    pub gap: Option<f64>,

    /// Target block error probability (channel mode)
    #[arg(long)]
    #[serde(default)]
    pub pe: Option<f64>,

    /// Target redundancy (source mode)
    #[arg(long)]
    #[serde(default)]
    pub target_redundancy: Option<f64>,

    /// Code rate (source mode)
    #[arg(long)]
    #[serde(default)]
    pub rate: Option<f64>,

    /// Distortion bound per symbol (source mode)
    #[arg(long, default_value_t = 1.0)]
    #[serde(default = "default_d_max")]
    pub d_max: f64,

    /// Decay rate rho
    #[arg(long, default_value_t = 0.2097)]
    #[serde(default = "default_rho")]
    pub rho: f64,

    /// Rate of the first iterate (sets L_1 = 2^-rho1 in the prefactor)
    #[arg(long, default_value_t = 0.1498)]
    #[serde(default = "default_rho1")]
    pub rho1: f64,

    /// Reference depth k whose k-th root realizes rho
    #[arg(long, default_value_t = 50)]
    #[serde(default = "default_k_ref")]
    pub k_ref: u32,

    /// Band parameter eta (channel mode)
    #[arg(long, default_value_t = 0.45)]
    #[serde(default = "default_eta")]
    pub eta: f64,

    /// Band parameter kappa (channel mode)
    #[arg(long, default_value_t = 8.0)]
    #[serde(default = "default_kappa")]
    pub kappa: f64,

    /// Base-function exponents used in the prefactor
    #[arg(long, default_value_t = 0.7)]
    #[serde(default = "default_alpha")]
    pub alpha: f64,

    #[arg(long, default_value_t = 0.6)]
    #[serde(default = "default_beta")]
    pub beta: f64,

    /// Channel spec (inline JSON or @file); fixes Z(W) in the prefactor
    #[arg(long)]
    #[serde(default)]
    pub channel: Option<String>,

    /// Explicit alpha1, overriding the assembled prefactor
    #[arg(long)]
    #[serde(default)]
    pub alpha1: Option<f64>,

    /// Sweep grid for eta (source mode), comma-separated
    #[arg(long)]
    #[serde(default)]
    pub eta_grid: Option<String>,

    /// Sweep grid for kappa (source mode), comma-separated
    #[arg(long)]
    #[serde(default)]
    pub kappa_grid: Option<String>,

    /// Output path; `-` for stdout
    #[arg(long, default_value = "-")]
    #[serde(default = "default_out")]
    pub out: String,

    /// JSON config file replacing all flags
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<String>,
}

fn default_d_max() -> f64 {
    1.0
}
fn default_rho() -> f64 {
    0.2097
}
fn default_rho1() -> f64 {
    0.1498
}
fn default_k_ref() -> u32 {
    50
}
fn default_eta() -> f64 {
    0.45
}
fn default_kappa() -> f64 {
    8.0
}
fn default_alpha() -> f64 {
    0.7
}
fn default_beta() -> f64 {
    0.6
}
fn default_out() -> String {
    "-".into()
}

fn parse_grid(s: &str) -> Result<Vec<f64>, Failure> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| Failure::invalid(format!("bad grid value {t:?}: {e}")))
        })
        .collect()
}

/// Assembles the alpha1 prefactor from the reported rates, without running
/// the full exponent iteration.
fn assemble_alpha1(args: &BoundArgs) -> Result<f64, Failure> {
    if let Some(a) = args.alpha1 {
        return Ok(a);
    }
    // Synthetic exponent results carrying exactly L_1 = 2^-rho1 and
    // L_k = 2^(-rho k); lk_sup would produce the same fields.
    let f0 = make_f0(args.alpha, args.beta, 1 << 10)?;
    let mk = |k: u32, rho: f64| ExponentResult {
        k,
        l_k: (-rho * k as f64).exp2(),
        rho_k: rho,
        argmax_z: 0.0,
        curve: vec![],
    };
    let r1 = mk(1, args.rho1);
    let rk = mk(args.k_ref, args.rho);
    Ok(match &args.channel {
        Some(spec) => alpha1_constant(&parse_channel(spec)?, &f0, &r1, &rk)?,
        None => alpha1_sup(&f0, &r1, &rk)?,
    })
}

pub fn run(args: BoundArgs) -> Result<(), Failure> {
    let args = maybe_load_config(&args.config, args)?;
    let alpha1 = assemble_alpha1(&args)?;
    match (args.gap, args.target_redundancy) {
        (Some(gap), None) => {
            let pe = args
                .pe
                .ok_or_else(|| Failure::invalid("channel mode needs --pe"))?;
            let params = BoundParams::new(args.eta, args.kappa, args.rho, alpha1)?;
            let report = required_blocklength_channel(gap, pe, &params)?;
            write_out(&args.out, &json_report(&args, &report)?)?;
            Ok(())
        }
        (None, Some(target)) => {
            let rate = args
                .rate
                .ok_or_else(|| Failure::invalid("source mode needs --rate"))?;
            let mut sweep = SweepGrid::default();
            if let Some(g) = &args.eta_grid {
                sweep.etas = parse_grid(g)?;
            }
            if let Some(g) = &args.kappa_grid {
                sweep.kappas = parse_grid(g)?;
            }
            let report = required_blocklength_source(
                target,
                rate,
                args.d_max,
                &BinaryHammingSource,
                alpha1,
                args.rho,
                &sweep,
            )?;
            write_out(&args.out, &json_report(&args, &report)?)?;
            Ok(())
        }
        (Some(_), Some(_)) => Err(Failure::invalid(
            "give either --gap (channel) or --target-redundancy (source), not both",
        )),
        (None, None) => Err(Failure::invalid(
            "nothing to bound: give --gap with --pe, or --target-redundancy with --rate",
        )),
    }
}
