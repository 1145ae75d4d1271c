use std::fs::File;
use std::path::PathBuf;

use clap::Args;
use ovlstat::screening::{
    fit_logistic_reference, parse_plates, screen_plate, synthetic_plate, write_calls_csv,
    write_plates, HitReport, PlateData, ScreenConfig, SsmdCriteria, SyntheticPlateConfig,
    SSMD_STRONG,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::output::{emit, CliResult, Context, Failure};

#[derive(Debug, Args)]
pub struct ScreenArgs {
    /// Plate CSV with header plate_id,well_id,row,col,value,well_type.
    #[arg(long)]
    pub input: PathBuf,
    /// False-positive budget for the Neyman–Pearson cutoff.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Weak SSMD criterion.
    #[arg(long = "ssmd-weak", default_value_t = 1.0)]
    pub ssmd_weak: f64,
    /// Plate whose controls train the logistic reference.
    #[arg(long = "train-plate", requires = "test_plate")]
    pub train_plate: Option<String>,
    /// Plate whose controls score the logistic reference.
    #[arg(long = "test-plate", requires = "train_plate")]
    pub test_plate: Option<String>,
    /// JSON report path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Optional flat CSV of per-well calls.
    #[arg(long = "calls-csv")]
    pub calls_csv: Option<PathBuf>,
}

#[derive(Debug, Serialize)]
pub struct SkippedPlate {
    pub plate_id: String,
    pub reason: String,
}

#[derive(Debug, Serialize)]
pub struct ScreenPayload {
    pub alpha: f64,
    pub ssmd_criteria: SsmdCriteria,
    pub plates: Vec<HitReport>,
    pub skipped: Vec<SkippedPlate>,
}

fn find<'a>(plates: &'a [PlateData], id: &str) -> CliResult<&'a PlateData> {
    plates
        .iter()
        .find(|p| p.plate_id == id)
        .ok_or_else(|| Failure::input(format!("plate `{id}` not found among usable plates")))
}

pub fn run(args: &ScreenArgs, ctx: &Context) -> CliResult {
    if !(args.alpha > 0.0 && args.alpha < 1.0) {
        return Err(Failure::input(format!(
            "--alpha must lie in (0, 1), got {}",
            args.alpha
        )));
    }
    let file = File::open(&args.input)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", args.input.display())))?;
    let batch = parse_plates(file)?;

    let mut skipped: Vec<SkippedPlate> = batch
        .rejected
        .iter()
        .map(|r| SkippedPlate {
            plate_id: r.plate_id.clone(),
            reason: r.reason.to_string(),
        })
        .collect();
    for s in &skipped {
        eprintln!("warning: skipping plate {}: {}", s.plate_id, s.reason);
    }

    let cfg = ScreenConfig {
        alpha: args.alpha,
        ssmd: SsmdCriteria {
            strong: SSMD_STRONG,
            weak: args.ssmd_weak,
        },
    };
    let results: Vec<_> = batch
        .plates
        .par_iter()
        .map(|p| (p, screen_plate(p, &cfg)))
        .collect();
    let mut reports = Vec::new();
    for (p, r) in results {
        match r {
            Ok(r) => reports.push(r),
            Err(e) => {
                eprintln!("warning: skipping plate {}: {e}", p.plate_id);
                skipped.push(SkippedPlate {
                    plate_id: p.plate_id.clone(),
                    reason: e.to_string(),
                });
            }
        }
    }
    if reports.is_empty() {
        return Err(Failure::no_data("no usable plates in input"));
    }
    for r in &reports {
        for w in &r.warnings {
            eprintln!("warning: {w}");
        }
    }

    if let (Some(train), Some(test)) = (&args.train_plate, &args.test_plate) {
        let reference =
            fit_logistic_reference(find(&batch.plates, train)?, find(&batch.plates, test)?)?;
        for r in reports.iter_mut().filter(|r| &r.plate_id == train) {
            r.reference = Some(reference);
        }
    }

    if let Some(path) = &args.calls_csv {
        let f = File::create(path)
            .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))?;
        write_calls_csv(&reports, f)?;
    }

    let payload = ScreenPayload {
        alpha: args.alpha,
        ssmd_criteria: cfg.ssmd,
        plates: reports,
        skipped,
    };
    let text = ctx.envelope(None, &payload).to_json()?;
    emit(args.out.as_deref(), text.as_bytes())
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value_t = 2)]
    pub plates: usize,
    #[arg(long = "hit-fraction", default_value_t = 0.1)]
    pub hit_fraction: f64,
    #[arg(long = "pos-mean", default_value_t = 0.2)]
    pub pos_mean: f64,
    #[arg(long = "pos-sd", default_value_t = 0.05)]
    pub pos_sd: f64,
    #[arg(long = "neg-mean", default_value_t = 1.0)]
    pub neg_mean: f64,
    #[arg(long = "neg-sd", default_value_t = 0.1)]
    pub neg_sd: f64,
    /// Plate CSV output; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Optional CSV of planted ground truth (plate_id,well_id,is_hit).
    #[arg(long)]
    pub truth: Option<PathBuf>,
}

pub fn run_synth(args: &SynthArgs) -> CliResult {
    let mut plates = Vec::new();
    let mut truth = String::from("plate_id,well_id,is_hit\n");
    for i in 0..args.plates {
        let s = synthetic_plate(&SyntheticPlateConfig {
            plate_id: format!("plate{}", i + 1),
            pos_mean: args.pos_mean,
            pos_sd: args.pos_sd,
            neg_mean: args.neg_mean,
            neg_sd: args.neg_sd,
            hit_fraction: args.hit_fraction,
            seed: args.seed.wrapping_add(i as u64),
            ..SyntheticPlateConfig::default()
        })?;
        for (well, hit) in &s.truth {
            truth.push_str(&format!("{},{well},{hit}\n", s.plate.plate_id));
        }
        plates.push(s.plate);
    }
    let mut buf = Vec::new();
    write_plates(&plates, &mut buf)?;
    emit(args.out.as_deref(), &buf)?;
    if let Some(path) = &args.truth {
        emit(Some(path), truth.as_bytes())?;
    }
    Ok(())
}
