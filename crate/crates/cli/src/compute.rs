use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use ovlstat::overlap::OverlapParams;
use ovlstat::{effect_size_report, BinRule, EffectSizeReport, OverlapMethod, SampleSet};

use crate::output::{emit, CliResult, Context, Failure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Histogram,
    Parametric,
    Kde,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// `auto` or a positive bin count.
pub fn parse_bins(s: &str) -> Result<BinRule, String> {
    if s.eq_ignore_ascii_case("auto") {
        return Ok(BinRule::Auto);
    }
    match s.parse::<usize>() {
        Ok(k) if k >= 1 => Ok(BinRule::Fixed(k)),
        _ => Err(format!("expected `auto` or a positive integer, got `{s}`")),
    }
}

pub fn overlap_method(method: MethodArg, bins: BinRule, bandwidth: Option<f64>) -> OverlapMethod {
    match method {
        MethodArg::Histogram => OverlapMethod::Histogram { bins },
        MethodArg::Parametric => OverlapMethod::ParametricNormal,
        MethodArg::Kde => OverlapMethod::Kde { bandwidth },
    }
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    /// Positive group: one number per line.
    #[arg(long)]
    pub pos: PathBuf,
    /// Negative group: one number per line.
    #[arg(long)]
    pub neg: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::Histogram)]
    pub method: MethodArg,
    #[arg(long, default_value = "auto", value_parser = parse_bins)]
    pub bins: BinRule,
    /// KDE bandwidth; Silverman's rule when omitted.
    #[arg(long)]
    pub bandwidth: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Reads one value per line; blank lines are skipped.
pub fn read_values(path: &Path) -> CliResult<SampleSet> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let v: f64 = line.parse().map_err(|_| {
            Failure::input(format!(
                "{}:{}: `{line}` is not a number",
                path.display(),
                i + 1
            ))
        })?;
        if !v.is_finite() {
            return Err(Failure::input(format!(
                "{}:{}: value is not finite",
                path.display(),
                i + 1
            )));
        }
        values.push(v);
    }
    SampleSet::from_values(values).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

const CSV_HEADER: &str = "n_pos,n_neg,z_factor,ssmd,robust_z_factor,robust_ssmd,gssmd,ovl,method,bins,bandwidth_a,bandwidth_b,pooled_sd";

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn report_csv(r: &EffectSizeReport) -> String {
    let (mut bins, mut bw_a, mut bw_b, mut pooled) = (None, None, None, None);
    let mut method = String::new();
    if let Some(o) = &r.overlap {
        method = serde_json::to_value(o.method)
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned))
            .unwrap_or_default();
        match o.params {
            OverlapParams::Histogram { bins: k } => bins = Some(k),
            OverlapParams::Kde {
                bandwidth_a,
                bandwidth_b,
                ..
            } => {
                bw_a = Some(bandwidth_a);
                bw_b = Some(bandwidth_b);
            }
            OverlapParams::ParametricNormal { pooled_sd, .. } => pooled = Some(pooled_sd),
        }
    }
    format!(
        "{CSV_HEADER}\n{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
        r.n_pos,
        r.n_neg,
        cell(r.z_factor),
        cell(r.ssmd),
        cell(r.robust_z_factor),
        cell(r.robust_ssmd),
        cell(r.gssmd),
        cell(r.overlap.map(|o| o.ovl)),
        method,
        bins.map(|b| b.to_string()).unwrap_or_default(),
        cell(bw_a),
        cell(bw_b),
        cell(pooled),
    )
}

pub fn run(args: &ComputeArgs, ctx: &Context) -> CliResult {
    if let Some(h) = args.bandwidth {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Failure::input(format!(
                "--bandwidth must be positive, got {h}"
            )));
        }
    }
    let pos = read_values(&args.pos)?;
    let neg = read_values(&args.neg)?;
    let method = overlap_method(args.method, args.bins, args.bandwidth);
    let report = effect_size_report(&pos, &neg, method);
    for issue in &report.issues {
        eprintln!("warning: {issue}");
    }
    let text = match args.format {
        Format::Json => ctx.envelope(None, &report).to_json()?,
        Format::Csv => report_csv(&report),
    };
    emit(args.out.as_deref(), text.as_bytes())
}
