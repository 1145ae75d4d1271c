use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use ovlstat::simulation::{
    run_null_bound_experiment, run_outlier_experiment, run_shift_experiment, MeasureTable,
    SimConfig, SimDistribution,
};
use ovlstat::BinRule;

use crate::compute::{overlap_method, parse_bins, Format, MethodArg};
use crate::output::{emit, CliResult, Context};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistributionArg {
    Normal,
    Lognormal,
}

#[derive(Debug, Args)]
pub struct CommonSimArgs {
    /// Required: every table must be reproducible.
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    /// Samples per group (for null-bound, shorthand for a single --sizes entry).
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_enum, default_value_t = DistributionArg::Normal)]
    pub distribution: DistributionArg,
    #[arg(long, value_enum, default_value_t = MethodArg::Histogram)]
    pub method: MethodArg,
    #[arg(long, default_value = "auto", value_parser = parse_bins)]
    pub bins: BinRule,
    #[arg(long)]
    pub bandwidth: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ShiftArgs {
    #[command(flatten)]
    pub common: CommonSimArgs,
    /// Background standard deviations.
    #[arg(long, value_delimiter = ',', default_values_t = [1.0, 3.0, 5.0])]
    pub sigma: Vec<f64>,
    /// Mean differences added to the target group.
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 1.0, 2.0, 5.0, 10.0])]
    pub shift: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct OutlierArgs {
    #[command(flatten)]
    pub common: CommonSimArgs,
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.05, 0.10, 0.20, 0.30])]
    pub fraction: Vec<f64>,
    #[arg(long = "outlier-mean", value_delimiter = ',', default_values_t = [0.0, 1.0, 2.0, 5.0, 10.0, 20.0])]
    pub outlier_mean: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct NullArgs {
    #[command(flatten)]
    pub common: CommonSimArgs,
    #[arg(long, value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
}

#[derive(Debug, Subcommand)]
pub enum SimulateCommand {
    /// Background vs. mean-shifted target across background spreads.
    Shift(ShiftArgs),
    /// Outlier contamination of the positive group with no true difference.
    Outlier(OutlierArgs),
    /// GSSMD under the null, by sample size.
    NullBound(NullArgs),
}

fn base_config(c: &CommonSimArgs) -> SimConfig {
    SimConfig {
        trials: c.trials,
        n_per_group: c.n.unwrap_or(1000),
        seed: c.seed,
        distribution: match c.distribution {
            DistributionArg::Normal => SimDistribution::Normal,
            DistributionArg::Lognormal => SimDistribution::Lognormal,
        },
        method: overlap_method(c.method, c.bins, c.bandwidth),
        ..SimConfig::default()
    }
}

fn write_table(common: &CommonSimArgs, table: &MeasureTable, ctx: &Context) -> CliResult {
    let text = match common.format {
        Format::Csv => table.to_csv_string()?,
        Format::Json => ctx.envelope(Some(common.seed), table).to_json()?,
    };
    emit(common.out.as_deref(), text.as_bytes())
}

pub fn run(cmd: &SimulateCommand, ctx: &Context) -> CliResult {
    let (common, table) = match cmd {
        SimulateCommand::Shift(a) => {
            let cfg = SimConfig {
                sigmas: a.sigma.clone(),
                shifts: a.shift.clone(),
                ..base_config(&a.common)
            };
            (&a.common, run_shift_experiment(&cfg)?)
        }
        SimulateCommand::Outlier(a) => {
            let cfg = SimConfig {
                outlier_fractions: a.fraction.clone(),
                outlier_means: a.outlier_mean.clone(),
                ..base_config(&a.common)
            };
            (&a.common, run_outlier_experiment(&cfg)?)
        }
        SimulateCommand::NullBound(a) => {
            let mut cfg = base_config(&a.common);
            if let Some(sizes) = &a.sizes {
                cfg.sample_sizes = sizes.clone();
            } else if let Some(n) = a.common.n {
                cfg.sample_sizes = vec![n];
            }
            (&a.common, run_null_bound_experiment(&cfg)?)
        }
    };
    write_table(common, &table, ctx)
}
