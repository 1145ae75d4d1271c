use serde::{Deserialize, Serialize};

use super::logistic::LogisticReference;
use super::plate::PlateData;
use crate::error::{Error, Result};
use crate::overlap::{ecdf, BinRule, OverlapMethod};
use crate::report::{effect_size_report, EffectSizeReport};
use crate::risk::{
    neyman_pearson_threshold_directed, optimal_threshold, Direction, ThresholdResult,
};
use crate::stats::mean_variance;

/// Commonly cited SSMD cutoff for a strong RNAi effect.
pub const SSMD_STRONG: f64 = 3.0;
pub const SSMD_WEAK_DEFAULT: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SsmdCriteria {
    pub strong: f64,
    pub weak: f64,
}

impl Default for SsmdCriteria {
    fn default() -> Self {
        ssmd_thresholds()
    }
}

pub fn ssmd_thresholds() -> SsmdCriteria {
    SsmdCriteria {
        strong: SSMD_STRONG,
        weak: SSMD_WEAK_DEFAULT,
    }
}

/// Per-well SSMD against the negative controls, `(value - mean_neg) / (sqrt(2) sd_neg)`.
pub fn well_ssmd(value: f64, mean_neg: f64, sd_neg: f64) -> f64 {
    (value - mean_neg) / (std::f64::consts::SQRT_2 * sd_neg)
}

/// Value at which the per-well SSMD equals `criterion` in the hit direction.
pub fn ssmd_cutoff(criterion: f64, mean_neg: f64, sd_neg: f64, dir: Direction) -> f64 {
    mean_neg + dir.sign() * criterion * std::f64::consts::SQRT_2 * sd_neg
}

fn control_direction(p: &PlateData) -> Result<(Direction, f64, f64)> {
    let pos = p.positive_controls()?;
    let neg = p.negative_controls()?;
    let mp = mean_variance(pos.values()).0;
    let (mn, vn) = mean_variance(neg.values());
    Ok((Direction::from_means(mp, mn), mn, vn.sqrt()))
}

/// Risk-minimizing threshold between the plate's controls at equal priors.
pub fn gssmd_threshold(p: &PlateData) -> Result<ThresholdResult> {
    optimal_threshold(&p.positive_controls()?, &p.negative_controls()?, 0.5)
}

/// Control-distribution values read off each control ECDF at levels `OVL/2`
/// and `1 - OVL/2`: the plate's GSSMD bounds in assay units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OverlapBounds {
    pub ovl: f64,
    pub pos_lower: f64,
    pub pos_upper: f64,
    pub neg_lower: f64,
    pub neg_upper: f64,
}

pub fn overlap_bounds(p: &PlateData, ovl: f64) -> Result<OverlapBounds> {
    let fp = ecdf(&p.positive_controls()?);
    let fneg = ecdf(&p.negative_controls()?);
    let (lo, hi) = (ovl / 2.0, 1.0 - ovl / 2.0);
    Ok(OverlapBounds {
        ovl,
        pos_lower: fp.quantile(lo),
        pos_upper: fp.quantile(hi),
        neg_lower: fneg.quantile(lo),
        neg_upper: fneg.quantile(hi),
    })
}

/// Threshold values in assay units, plus the hit direction they apply in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HitThresholds {
    pub direction: Direction,
    /// `None` when control means tie.
    pub gssmd_eps0: Option<f64>,
    pub ssmd_strong: f64,
    pub ssmd_weak: f64,
    pub np_eps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WellCall {
    pub well_id: String,
    pub row: u32,
    pub col: u32,
    pub value: f64,
    pub is_hit_gssmd: bool,
    /// Beyond the strong SSMD criterion.
    pub is_hit_ssmd: bool,
    pub is_hit_ssmd_weak: bool,
    pub is_hit_np: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HitCounts {
    pub samples: usize,
    pub gssmd: usize,
    pub ssmd: usize,
    pub ssmd_weak: usize,
    pub np: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HitReport {
    pub plate_id: String,
    pub measures: EffectSizeReport,
    pub thresholds: HitThresholds,
    pub bounds: Option<OverlapBounds>,
    pub counts: HitCounts,
    pub calls: Vec<WellCall>,
    pub reference: Option<LogisticReference>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScreenConfig {
    /// False-positive budget for the Neyman–Pearson cutoff.
    pub alpha: f64,
    pub ssmd: SsmdCriteria,
}

impl Default for ScreenConfig {
    fn default() -> Self {
        Self {
            alpha: 0.05,
            ssmd: ssmd_thresholds(),
        }
    }
}

/// All five measures on the plate's controls, with GSSMD from auto-binned histograms.
pub fn plate_measures(p: &PlateData) -> Result<EffectSizeReport> {
    Ok(effect_size_report(
        &p.positive_controls()?,
        &p.negative_controls()?,
        OverlapMethod::Histogram {
            bins: BinRule::Auto,
        },
    ))
}

/// Derives all threshold families from the plate's controls.
///
/// A tie between control means leaves `gssmd_eps0` empty and is reported as a
/// warning; the other thresholds fall back to the upward direction.
pub fn plate_thresholds(p: &PlateData, cfg: &ScreenConfig) -> Result<(HitThresholds, Vec<String>)> {
    let (dir, mean_neg, sd_neg) = control_direction(p)?;
    let mut warnings = Vec::new();
    let gssmd_eps0 = match gssmd_threshold(p) {
        Ok(t) => Some(t.epsilon0),
        Err(e @ Error::DirectionUndefined) => {
            warnings.push(format!("plate {}: gssmd threshold: {e}", p.plate_id));
            None
        }
        Err(e) => return Err(e),
    };
    let np = neyman_pearson_threshold_directed(&p.negative_controls()?, cfg.alpha, dir)?;
    Ok((
        HitThresholds {
            direction: dir,
            gssmd_eps0,
            ssmd_strong: ssmd_cutoff(cfg.ssmd.strong, mean_neg, sd_neg, dir),
            ssmd_weak: ssmd_cutoff(cfg.ssmd.weak, mean_neg, sd_neg, dir),
            np_eps: np.epsilon0,
        },
        warnings,
    ))
}

/// Applies each threshold to every sample well.
pub fn call_hits(p: &PlateData, thresholds: &HitThresholds) -> Vec<WellCall> {
    let dir = thresholds.direction;
    p.samples()
        .map(|w| WellCall {
            well_id: w.well_id.clone(),
            row: w.row,
            col: w.col,
            value: w.value,
            is_hit_gssmd: thresholds
                .gssmd_eps0
                .is_some_and(|t| dir.is_positive_call(w.value, t)),
            is_hit_ssmd: dir.is_positive_call(w.value, thresholds.ssmd_strong),
            is_hit_ssmd_weak: dir.is_positive_call(w.value, thresholds.ssmd_weak),
            is_hit_np: dir.is_positive_call(w.value, thresholds.np_eps),
        })
        .collect()
}

pub fn count_hits(calls: &[WellCall]) -> HitCounts {
    calls.iter().fold(
        HitCounts {
            samples: calls.len(),
            ..HitCounts::default()
        },
        |mut c, w| {
            c.gssmd += w.is_hit_gssmd as usize;
            c.ssmd += w.is_hit_ssmd as usize;
            c.ssmd_weak += w.is_hit_ssmd_weak as usize;
            c.np += w.is_hit_np as usize;
            c
        },
    )
}

/// Full per-plate pipeline: measures, thresholds, bounds and calls.
pub fn screen_plate(p: &PlateData, cfg: &ScreenConfig) -> Result<HitReport> {
    p.validate()?;
    let measures = plate_measures(p)?;
    let (thresholds, mut warnings) = plate_thresholds(p, cfg)?;
    warnings.extend(
        measures
            .issues
            .iter()
            .map(|i| format!("plate {}: {i}", p.plate_id)),
    );
    let bounds = match measures.overlap {
        Some(o) => Some(overlap_bounds(p, o.ovl)?),
        None => None,
    };
    let calls = call_hits(p, &thresholds);
    Ok(HitReport {
        plate_id: p.plate_id.clone(),
        counts: count_hits(&calls),
        measures,
        thresholds,
        bounds,
        calls,
        reference: None,
        warnings,
    })
}

impl HitReport {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }
}

pub const CALLS_HEADER: [&str; 9] = [
    "plate_id",
    "well_id",
    "row",
    "col",
    "value",
    "is_hit_gssmd",
    "is_hit_ssmd",
    "is_hit_ssmd_weak",
    "is_hit_np",
];

/// Flat CSV of per-well calls for a set of reports.
pub fn write_calls_csv<W: std::io::Write>(reports: &[HitReport], out: W) -> Result<()> {
    #[derive(Serialize)]
    struct Row<'a> {
        plate_id: &'a str,
        well_id: &'a str,
        row: u32,
        col: u32,
        value: f64,
        is_hit_gssmd: bool,
        is_hit_ssmd: bool,
        is_hit_ssmd_weak: bool,
        is_hit_np: bool,
    }
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(CALLS_HEADER).map_err(io)?;
    for r in reports {
        for c in &r.calls {
            w.serialize(Row {
                plate_id: &r.plate_id,
                well_id: &c.well_id,
                row: c.row,
                col: c.col,
                value: c.value,
                is_hit_gssmd: c.is_hit_gssmd,
                is_hit_ssmd: c.is_hit_ssmd,
                is_hit_ssmd_weak: c.is_hit_ssmd_weak,
                is_hit_np: c.is_hit_np,
            })
            .map_err(io)?;
        }
    }
    w.flush()?;
    Ok(())
}
