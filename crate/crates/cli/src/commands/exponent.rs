//! `polarlab exponent`: rho series and ratio-curve exports.

use clap::Args;
use serde::{Deserialize, Serialize};

use polarlab::exponent::{rho_series, Variant, DEFAULT_GRID_M};

use crate::output::{csv_document, json_report, maybe_load_config, write_out};
use crate::Failure;

#[derive(Args, Serialize, Deserialize, Clone)]
#[serde(deny_unknown_fields)]
pub struct ExponentArgs {
    /// Which recursion to iterate
    #[arg(long, value_enum, default_value = "bhattacharyya")]
    #[serde(default = "default_variant")]
    pub variant: VariantArg,

    /// Left exponent of the base function (bhattacharyya variant)
    #[arg(long, default_value_t = 0.7)]
    #[serde(default = "default_alpha")]
    pub alpha: f64,

    /// Right exponent of the base function (bhattacharyya variant)
    #[arg(long, default_value_t = 0.6)]
    #[serde(default = "default_beta")]
    pub beta: f64,

    /// Grid resolution M (M + 1 samples)
    #[arg(long, default_value_t = DEFAULT_GRID_M)]
    #[serde(default = "default_grid")]
    pub grid: usize,

    /// Number of iterates
    #[arg(long, default_value_t = 50)]
    #[serde(default = "default_k_max")]
    pub k_max: u32,

    /// Comma-separated k values whose full curves are exported
    #[arg(long, default_value = "1,50")]
    #[serde(default = "default_curve_k")]
    pub curve_k: String,

    /// Output directory (csv) or file (json); `-` writes json to stdout
    #[arg(long, default_value = "exponent-out")]
    #[serde(default = "default_out")]
    pub out: String,

    /// Output format
    #[arg(long, value_enum, default_value = "csv")]
    #[serde(default = "default_format")]
    pub format: FormatArg,

    /// JSON config file replacing all flags
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<String>,
}

fn default_variant() -> VariantArg {
    VariantArg::Bhattacharyya
}
fn default_alpha() -> f64 {
    0.7
}
fn default_beta() -> f64 {
    0.6
}
fn default_grid() -> usize {
    DEFAULT_GRID_M
}
fn default_k_max() -> u32 {
    50
}
fn default_curve_k() -> String {
    "1,50".into()
}
fn default_out() -> String {
    "exponent-out".into()
}
fn default_format() -> FormatArg {
    FormatArg::Csv
}

#[derive(clap::ValueEnum, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case")]
pub enum VariantArg {
    Bhattacharyya,
    MutualInformation,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Bhattacharyya => Variant::Bhattacharyya,
            VariantArg::MutualInformation => Variant::MutualInformation,
        }
    }
}

#[derive(clap::ValueEnum, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "kebab-case")]
pub enum FormatArg {
    Csv,
    Json,
}

pub fn run(args: ExponentArgs) -> Result<(), Failure> {
    let args = maybe_load_config(&args.config, args)?;
    let curve_ks: Vec<u32> = if args.curve_k.trim().is_empty() {
        vec![]
    } else {
        args.curve_k
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|e| Failure::invalid(format!("bad curve k {t:?}: {e}")))
            })
            .collect::<Result<_, _>>()?
    };
    if let Some(&bad) = curve_ks.iter().find(|&&k| k == 0 || k > args.k_max) {
        return Err(Failure::invalid(format!(
            "curve k = {bad} outside 1..=k_max ({})",
            args.k_max
        )));
    }

    let series = rho_series(
        args.variant.into(),
        args.alpha,
        args.beta,
        args.grid,
        args.k_max,
    )?;

    match args.format {
        FormatArg::Json => {
            #[derive(Serialize)]
            struct Curve {
                k: u32,
                z: Vec<f64>,
                log2_ratio_over_k: Vec<f64>,
            }
            #[derive(Serialize)]
            struct Report {
                k: Vec<u32>,
                l_k: Vec<f64>,
                rho_k: Vec<f64>,
                argmax_z: Vec<f64>,
                curves: Vec<Curve>,
            }
            let m = args.grid;
            let report = Report {
                k: series.iter().map(|r| r.k).collect(),
                l_k: series.iter().map(|r| r.l_k).collect(),
                rho_k: series.iter().map(|r| r.rho_k).collect(),
                argmax_z: series.iter().map(|r| r.argmax_z).collect(),
                curves: curve_ks
                    .iter()
                    .map(|&k| {
                        let r = &series[(k - 1) as usize];
                        Curve {
                            k,
                            z: (0..=m).map(|j| j as f64 / m as f64).collect(),
                            log2_ratio_over_k: r
                                .curve
                                .iter()
                                .map(|&l| l.log2() / k as f64)
                                .collect(),
                        }
                    })
                    .collect(),
            };
            write_out(&args.out, &json_report(&args, &report)?)?;
        }
        FormatArg::Csv => {
            let dir = std::path::Path::new(&args.out);
            std::fs::create_dir_all(dir)?;
            let rows: Vec<String> = series
                .iter()
                .map(|r| format!("{},{:.17e},{:.6},{:.8}", r.k, r.l_k, r.rho_k, r.argmax_z))
                .collect();
            let doc = csv_document(&args, "k,l_k,rho_k,argmax_z", &rows)?;
            std::fs::write(dir.join("rho_series.csv"), doc)?;
            for &k in &curve_ks {
                let r = &series[(k - 1) as usize];
                let m = args.grid;
                let rows: Vec<String> = r
                    .curve
                    .iter()
                    .enumerate()
                    .map(|(j, &l)| {
                        format!("{:.10},{:.10}", j as f64 / m as f64, l.log2() / k as f64)
                    })
                    .collect();
                let doc = csv_document(&args, "z,log2_L_k_over_k", &rows)?;
                std::fs::write(dir.join(format!("curve_k{k}.csv")), doc)?;
            }
        }
    }
    Ok(())
}
