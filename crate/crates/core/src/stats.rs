//! Descriptive statistics and the classical effect-size measures: SSMD,
//! robust SSMD, Z'-factor and robust Z'-factor.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sample::SampleSet;

/// Consistency constant making the MAD estimate the standard deviation of a normal.
pub const MAD_SCALE: f64 = 1.4826;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub mean: f64,
    /// Unbiased (divisor n - 1); zero for a single observation.
    pub variance: f64,
    pub median: f64,
    /// Median absolute deviation, scaled by [`MAD_SCALE`].
    pub mad: f64,
    pub n: usize,
}

impl SummaryStats {
    pub fn sd(&self) -> f64 {
        self.variance.sqrt()
    }
}

/// Welford's single-pass mean and unbiased variance.
pub fn mean_variance(values: &[f64]) -> (f64, f64) {
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for (i, &x) in values.iter().enumerate() {
        let delta = x - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (x - mean);
    }
    let n = values.len();
    let var = if n > 1 {
        (m2 / (n - 1) as f64).max(0.0)
    } else {
        0.0
    };
    (mean, var)
}

/// Median of a scratch buffer; reorders `buf`.
pub fn median_in_place(buf: &mut [f64]) -> f64 {
    let n = buf.len();
    assert!(n > 0, "median of empty slice");
    let mid = n / 2;
    let (left, upper, _) = buf.select_nth_unstable_by(mid, f64::total_cmp);
    let upper = *upper;
    if n % 2 == 1 {
        upper
    } else {
        let lower = left.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        lower + (upper - lower) / 2.0
    }
}

/// Median and scaled MAD.
pub fn median_mad(values: &[f64]) -> (f64, f64) {
    let mut buf = values.to_vec();
    let median = median_in_place(&mut buf);
    for (b, &v) in buf.iter_mut().zip(values) {
        *b = (v - median).abs();
    }
    let mad = MAD_SCALE * median_in_place(&mut buf);
    (median, mad)
}

pub fn summarize(s: &SampleSet) -> SummaryStats {
    let (mean, variance) = mean_variance(s.values());
    let (median, mad) = median_mad(s.values());
    SummaryStats {
        mean,
        variance,
        median,
        mad,
        n: s.len(),
    }
}

/// Like [`summarize`] but accepting a raw slice; returns `InvalidInput` when empty.
pub fn summarize_slice(values: &[f64]) -> Result<SummaryStats> {
    if values.is_empty() {
        return Err(Error::InvalidInput(
            "cannot summarize an empty sample".into(),
        ));
    }
    let (mean, variance) = mean_variance(values);
    let (median, mad) = median_mad(values);
    Ok(SummaryStats {
        mean,
        variance,
        median,
        mad,
        n: values.len(),
    })
}

fn standardized_difference(diff: f64, spread_a: f64, spread_b: f64) -> Result<f64> {
    let denom = (spread_a * spread_a + spread_b * spread_b).sqrt();
    if denom == 0.0 {
        return Err(Error::DegenerateVariance);
    }
    Ok(diff / denom)
}

fn z_like(loc_a: f64, loc_b: f64, spread_a: f64, spread_b: f64) -> Result<f64> {
    let gap = (loc_a - loc_b).abs();
    if gap == 0.0 {
        return Err(Error::DivisionByZero);
    }
    Ok(1.0 - 3.0 * (spread_a + spread_b) / gap)
}

pub fn ssmd_from(pos: &SummaryStats, neg: &SummaryStats) -> Result<f64> {
    standardized_difference(pos.mean - neg.mean, pos.sd(), neg.sd())
}

pub fn robust_ssmd_from(pos: &SummaryStats, neg: &SummaryStats) -> Result<f64> {
    standardized_difference(pos.median - neg.median, pos.mad, neg.mad)
}

pub fn z_factor_from(pos: &SummaryStats, neg: &SummaryStats) -> Result<f64> {
    z_like(pos.mean, neg.mean, pos.sd(), neg.sd())
}

pub fn robust_z_factor_from(pos: &SummaryStats, neg: &SummaryStats) -> Result<f64> {
    z_like(pos.median, neg.median, pos.mad, neg.mad)
}

/// Strictly standardized mean difference `(mean_pos - mean_neg) / sqrt(var_pos + var_neg)`.
pub fn ssmd(pos: &SampleSet, neg: &SampleSet) -> Result<f64> {
    ssmd_from(&summarize(pos), &summarize(neg))
}

/// SSMD with medians and scaled MADs in place of means and standard deviations.
pub fn robust_ssmd(pos: &SampleSet, neg: &SampleSet) -> Result<f64> {
    robust_ssmd_from(&summarize(pos), &summarize(neg))
}

/// Z'-factor `1 - 3 (sd_pos + sd_neg) / |mean_pos - mean_neg|`.
pub fn z_factor(pos: &SampleSet, neg: &SampleSet) -> Result<f64> {
    z_factor_from(&summarize(pos), &summarize(neg))
}

pub fn robust_z_factor(pos: &SampleSet, neg: &SampleSet) -> Result<f64> {
    robust_z_factor_from(&summarize(pos), &summarize(neg))
}
