use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sample::SampleSet;

/// Equal-width binned density of one sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    edges: Vec<f64>,
    counts: Vec<u64>,
    total: u64,
}

impl Histogram {
    /// `k + 1` strictly increasing bin edges.
    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Per-bin probability mass.
    pub fn masses(&self) -> Vec<f64> {
        let n = self.total as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }
}

/// Bin count `ceil(1 + log2(n))`.
pub fn sturges_bins(n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::InvalidInput(
            "bin rule needs at least one sample".into(),
        ));
    }
    // Powers of two must land exactly, so use the integer log when it applies.
    if n.is_power_of_two() {
        return Ok(1 + n.trailing_zeros() as usize);
    }
    Ok((1.0 + (n as f64).log2()).ceil().max(1.0) as usize)
}

/// Bins `a` and `b` on shared equal-width edges spanning `[min(a ∪ b), max(a ∪ b)]`.
///
/// Bins are half-open `[lo, hi)` except the last, which is closed. When every value
/// is identical a single unit-width bin centred on that value is used.
pub fn build_common_histograms(
    a: &SampleSet,
    b: &SampleSet,
    bins: usize,
) -> Result<(Histogram, Histogram)> {
    if bins == 0 {
        return Err(Error::InvalidInput("bin count must be at least 1".into()));
    }
    let lo = a.min().min(b.min());
    let hi = a.max().max(b.max());

    if lo == hi {
        let edges = vec![lo - 0.5, lo + 0.5];
        let single = |s: &SampleSet| Histogram {
            edges: edges.clone(),
            counts: vec![s.len() as u64],
            total: s.len() as u64,
        };
        return Ok((single(a), single(b)));
    }

    let span = hi - lo;
    let k = bins as f64;
    let mut edges: Vec<f64> = (0..=bins).map(|i| lo + span * (i as f64 / k)).collect();
    edges[bins] = hi;

    let bin_of = |x: f64| -> usize {
        let idx = ((x - lo) / span * k).floor();
        if idx < 0.0 {
            0
        } else {
            (idx as usize).min(bins - 1)
        }
    };
    let fill = |s: &SampleSet| {
        let mut counts = vec![0u64; bins];
        for &x in s.values() {
            counts[bin_of(x)] += 1;
        }
        Histogram {
            edges: edges.clone(),
            counts,
            total: s.len() as u64,
        }
    };
    Ok((fill(a), fill(b)))
}

/// `Σ min(mass_a, mass_b)` over shared bins, evaluated in integer arithmetic so
/// identical inputs give exactly 1 and the result is symmetric in its arguments.
pub fn histogram_overlap(ha: &Histogram, hb: &Histogram) -> f64 {
    debug_assert_eq!(ha.bins(), hb.bins());
    let (na, nb) = (ha.total as u128, hb.total as u128);
    let shared: u128 = ha
        .counts
        .iter()
        .zip(&hb.counts)
        .map(|(&ca, &cb)| (ca as u128 * nb).min(cb as u128 * na))
        .sum();
    let ovl = shared as f64 / (na * nb) as f64;
    ovl.clamp(0.0, 1.0)
}
