//! Misclassification risk of single-threshold classifiers and threshold selection.
//!
//! All computations are phrased for a positive group lying above the negative
//! group. When the positive mean is lower the direction flips: a value is called
//! positive when it falls *below* the threshold.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::overlap::EmpiricalCdf;
use crate::sample::SampleSet;
use crate::stats::mean_variance;

/// Which side of a threshold counts as a positive call.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// Positive when `value > threshold`.
    Above,
    /// Positive when `value < threshold`.
    Below,
}

impl Direction {
    /// From group means; a tie is treated as `Above`.
    pub fn from_means(mean_pos: f64, mean_neg: f64) -> Self {
        if mean_pos < mean_neg {
            Direction::Below
        } else {
            Direction::Above
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Direction::Above => 1.0,
            Direction::Below => -1.0,
        }
    }

    pub fn is_positive_call(self, value: f64, threshold: f64) -> bool {
        match self {
            Direction::Above => value > threshold,
            Direction::Below => value < threshold,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskProfile {
    pub threshold: f64,
    pub fpr: f64,
    pub fnr: f64,
    pub total_risk: f64,
    pub prior_pos: f64,
    pub direction: Direction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdMethod {
    RiskMin,
    NeymanPearson,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub epsilon0: f64,
    pub method: ThresholdMethod,
    pub direction: Direction,
    /// Minimum empirical risk (risk-minimizing thresholds only).
    pub min_risk: Option<f64>,
    /// `fpr + fnr` at the solution, i.e. twice the equal-prior risk there.
    pub ovl_at_solution: Option<f64>,
    pub fpr: f64,
    pub fnr: Option<f64>,
}

fn check_prior(prior_pos: f64) -> Result<()> {
    if prior_pos > 0.0 && prior_pos < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "prior must lie strictly between 0 and 1, got {prior_pos}"
        )))
    }
}

fn ecdf_mean(f: &EmpiricalCdf) -> f64 {
    mean_variance(f.sorted_values()).0
}

fn count_lt(f: &EmpiricalCdf, x: f64) -> usize {
    f.sorted_values().partition_point(|&v| v < x)
}

/// Error rates of the classifier at `eps` in a fixed direction.
fn rates(eps: f64, pos: &EmpiricalCdf, neg: &EmpiricalCdf, dir: Direction) -> (f64, f64) {
    let (np, nn) = (pos.len() as f64, neg.len() as f64);
    match dir {
        Direction::Above => {
            let fnr = pos.count_le(eps) as f64 / np;
            let fpr = (neg.len() - neg.count_le(eps)) as f64 / nn;
            (fpr, fnr)
        }
        Direction::Below => {
            let fnr = (pos.len() - count_lt(pos, eps)) as f64 / np;
            let fpr = count_lt(neg, eps) as f64 / nn;
            (fpr, fnr)
        }
    }
}

fn profile(
    eps: f64,
    pos: &EmpiricalCdf,
    neg: &EmpiricalCdf,
    prior_pos: f64,
    dir: Direction,
) -> RiskProfile {
    let (fpr, fnr) = rates(eps, pos, neg, dir);
    RiskProfile {
        threshold: eps,
        fpr,
        fnr,
        total_risk: (1.0 - prior_pos) * fpr + prior_pos * fnr,
        prior_pos,
        direction: dir,
    }
}

/// Empirical false-positive, false-negative and prior-weighted total risk at `eps`.
pub fn risk_at(
    eps: f64,
    pos: &EmpiricalCdf,
    neg: &EmpiricalCdf,
    prior_pos: f64,
) -> Result<RiskProfile> {
    check_prior(prior_pos)?;
    let dir = Direction::from_means(ecdf_mean(pos), ecdf_mean(neg));
    Ok(profile(eps, pos, neg, prior_pos, dir))
}

/// Candidate thresholds: midpoints between adjacent distinct pooled values, plus ±∞.
pub fn candidate_thresholds(pos: &SampleSet, neg: &SampleSet) -> Vec<f64> {
    let mut pooled: Vec<f64> = pos.values().iter().chain(neg.values()).copied().collect();
    pooled.sort_unstable_by(f64::total_cmp);
    pooled.dedup();
    let mut out = Vec::with_capacity(pooled.len() + 1);
    out.push(f64::NEG_INFINITY);
    out.extend(pooled.windows(2).map(|w| w[0] + (w[1] - w[0]) / 2.0));
    out.push(f64::INFINITY);
    out
}

/// Scans the candidate grid for the risk-minimizing threshold.
///
/// Ties go to the candidate nearest the midpoint of the two group means.
pub fn optimal_threshold(
    pos: &SampleSet,
    neg: &SampleSet,
    prior_pos: f64,
) -> Result<ThresholdResult> {
    check_prior(prior_pos)?;
    let mean_pos = mean_variance(pos.values()).0;
    let mean_neg = mean_variance(neg.values()).0;
    if mean_pos == mean_neg {
        return Err(Error::DirectionUndefined);
    }
    let dir = Direction::from_means(mean_pos, mean_neg);
    let centre = mean_pos + (mean_neg - mean_pos) / 2.0;
    let (fp, fneg) = (EmpiricalCdf::new(pos), EmpiricalCdf::new(neg));

    const TIE: f64 = 1e-12;
    let mut best: Option<RiskProfile> = None;
    for eps in candidate_thresholds(pos, neg) {
        let cand = profile(eps, &fp, &fneg, prior_pos, dir);
        best = match best {
            None => Some(cand),
            Some(b) if cand.total_risk < b.total_risk - TIE => Some(cand),
            Some(b)
                if (cand.total_risk - b.total_risk).abs() <= TIE
                    && (eps - centre).abs() < (b.threshold - centre).abs() =>
            {
                Some(cand)
            }
            keep => keep,
        };
    }
    let best = best.expect("candidate grid always has the two sentinels");
    Ok(ThresholdResult {
        epsilon0: best.threshold,
        method: ThresholdMethod::RiskMin,
        direction: dir,
        min_risk: Some(best.total_risk),
        ovl_at_solution: Some(best.fpr + best.fnr),
        fpr: best.fpr,
        fnr: Some(best.fnr),
    })
}

/// `sign * (2 pmax - 1)`: GSSMD from the best achievable classification accuracy.
pub fn gssmd_from_pmax(pmax: f64, direction_sign: f64) -> Result<f64> {
    if !(0.5..=1.0).contains(&pmax) {
        return Err(Error::InvalidInput(format!(
            "pmax must lie in [0.5, 1], got {pmax}"
        )));
    }
    if direction_sign != 1.0 && direction_sign != -1.0 {
        return Err(Error::InvalidInput(format!(
            "direction sign must be +1 or -1, got {direction_sign}"
        )));
    }
    Ok(direction_sign * (2.0 * pmax - 1.0))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )))
    }
}

/// Smallest negative-control value `x` whose empirical exceedance `#{v > x}/n` is at most `alpha`.
pub fn neyman_pearson_threshold(neg: &SampleSet, alpha: f64) -> Result<ThresholdResult> {
    neyman_pearson_threshold_directed(neg, alpha, Direction::Above)
}

/// Neyman–Pearson cutoff for either hit direction.
///
/// For [`Direction::Below`] this is the largest value `x` with `#{v < x}/n <= alpha`.
pub fn neyman_pearson_threshold_directed(
    neg: &SampleSet,
    alpha: f64,
    dir: Direction,
) -> Result<ThresholdResult> {
    check_alpha(alpha)?;
    let mut sorted = neg.values().to_vec();
    if dir == Direction::Below {
        sorted.iter_mut().for_each(|v| *v = -*v);
    }
    sorted.sort_unstable_by(f64::total_cmp);
    let n = sorted.len();
    let budget = alpha * n as f64 * (1.0 + 1e-12);
    // Exceedance falls as x grows, so the first admissible order statistic is the answer.
    let idx = (0..n)
        .find(|&i| {
            let above = n - sorted.partition_point(|&v| v <= sorted[i]);
            above as f64 <= budget
        })
        .unwrap_or(n - 1);
    let x = sorted[idx];
    let above = n - sorted.partition_point(|&v| v <= x);
    let eps = if dir == Direction::Below { -x } else { x };
    Ok(ThresholdResult {
        epsilon0: eps,
        method: ThresholdMethod::NeymanPearson,
        direction: dir,
        min_risk: None,
        ovl_at_solution: None,
        fpr: above as f64 / n as f64,
        fnr: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::overlap::{ecdf, parametric_normal_ovl, std_normal_cdf};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    fn set(v: &[f64]) -> SampleSet {
        SampleSet::from_values(v.to_vec()).unwrap()
    }

    #[test]
    fn risk_at_examples() {
        let pos = ecdf(&set(&[2.0, 3.0, 4.0]));
        let neg = ecdf(&set(&[0.0, 1.0, 2.0]));
        let r = risk_at(-10.0, &pos, &neg, 0.5).unwrap();
        assert_eq!((r.fnr, r.fpr, r.total_risk), (0.0, 1.0, 0.5));
        let r = risk_at(10.0, &pos, &neg, 0.5).unwrap();
        assert_eq!((r.fnr, r.fpr, r.total_risk), (1.0, 0.0, 0.5));
        let r = risk_at(1.5, &pos, &neg, 0.5).unwrap();
        assert_eq!(r.fnr, 0.0);
        assert!((r.fpr - 1.0 / 3.0).abs() < 1e-15);
        assert!((r.total_risk - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn risk_at_flips_for_lower_positive_group() {
        let pos = ecdf(&set(&[0.0, 1.0, 2.0]));
        let neg = ecdf(&set(&[2.0, 3.0, 4.0]));
        let r = risk_at(2.5, &pos, &neg, 0.5).unwrap();
        assert_eq!(r.direction, Direction::Below);
        assert_eq!(r.fnr, 0.0);
        assert!((r.fpr - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn invalid_prior() {
        let f = ecdf(&set(&[1.0]));
        assert!(risk_at(0.0, &f, &f, 0.0).is_err());
        assert!(risk_at(0.0, &f, &f, 1.0).is_err());
        assert!(optimal_threshold(&set(&[1.0]), &set(&[0.0]), 1.5).is_err());
    }

    #[test]
    fn identical_groups_are_at_chance_everywhere() {
        let s = set(&[0.3, 1.0, 2.5, 4.0, 4.0]);
        let f = ecdf(&s);
        for eps in candidate_thresholds(&s, &s) {
            assert_eq!(risk_at(eps, &f, &f, 0.5).unwrap().total_risk, 0.5);
        }
        assert_eq!(
            optimal_threshold(&s, &s, 0.5),
            Err(Error::DirectionUndefined)
        );
    }

    #[test]
    fn separable_groups() {
        let pos = set(&[10.0, 11.0, 12.0]);
        let neg = set(&[-2.0, -1.0, 0.0]);
        let t = optimal_threshold(&pos, &neg, 0.5).unwrap();
        assert_eq!(t.min_risk, Some(0.0));
        assert!(t.epsilon0 > 0.0 && t.epsilon0 < 10.0);
        assert_eq!(t.epsilon0, 5.0);

        let t = optimal_threshold(&neg, &pos, 0.5).unwrap();
        assert_eq!(t.direction, Direction::Below);
        assert_eq!(t.min_risk, Some(0.0));
        assert_eq!(t.epsilon0, 5.0);
    }

    #[test]
    fn normal_threshold_near_midpoint() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let d = Normal::new(0.0, 1.0).unwrap();
        let neg = set(&(0..10_000).map(|_| d.sample(&mut rng)).collect::<Vec<_>>());
        let pos = set(&(0..10_000)
            .map(|_| d.sample(&mut rng) + 2.0)
            .collect::<Vec<_>>());
        let t = optimal_threshold(&pos, &neg, 0.5).unwrap();
        assert!((t.epsilon0 - 1.0).abs() < 0.1, "{}", t.epsilon0);
        let pmin = t.min_risk.unwrap();
        assert!((pmin - std_normal_cdf(-1.0)).abs() < 0.02, "{pmin}");
        let ovl = t.ovl_at_solution.unwrap();
        assert!((ovl - 2.0 * pmin).abs() < 1e-12);
    }

    #[test]
    fn unequal_prior_moves_threshold_toward_rarer_class() {
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        let d = Normal::new(0.0, 1.0).unwrap();
        let neg = set(&(0..5000).map(|_| d.sample(&mut rng)).collect::<Vec<_>>());
        let pos = set(&(0..5000)
            .map(|_| d.sample(&mut rng) + 2.0)
            .collect::<Vec<_>>());
        let even = optimal_threshold(&pos, &neg, 0.5).unwrap().epsilon0;
        let rare = optimal_threshold(&pos, &neg, 0.1).unwrap().epsilon0;
        assert!(rare > even, "{rare} vs {even}");
    }

    #[test]
    fn pmax_examples() {
        assert_eq!(gssmd_from_pmax(0.5, 1.0).unwrap(), 0.0);
        assert_eq!(gssmd_from_pmax(1.0, 1.0).unwrap(), 1.0);
        assert_eq!(gssmd_from_pmax(1.0, -1.0).unwrap(), -1.0);
        let pmax = std_normal_cdf(1.0);
        let g = gssmd_from_pmax(pmax, 1.0).unwrap();
        assert!((g - (1.0 - parametric_normal_ovl(2.0, 1.0))).abs() < 1e-12);
        assert!((g - 0.682_689_492_137_086).abs() < 1e-12);
        assert!(gssmd_from_pmax(0.49, 1.0).is_err());
        assert!(gssmd_from_pmax(1.01, 1.0).is_err());
        assert!(gssmd_from_pmax(0.7, 0.0).is_err());
    }

    #[test]
    fn neyman_pearson_examples() {
        let neg = set(&(1..=100).map(f64::from).collect::<Vec<_>>());
        let t = neyman_pearson_threshold(&neg, 0.05).unwrap();
        assert_eq!(t.epsilon0, 95.0);
        assert_eq!(t.fpr, 0.05);
        assert_eq!(neyman_pearson_threshold(&neg, 0.999).unwrap().epsilon0, 1.0);
        let t = neyman_pearson_threshold(&neg, 0.5).unwrap();
        assert_eq!(t.epsilon0, 50.0);
        assert!(neyman_pearson_threshold(&neg, 0.0).is_err());
        assert!(neyman_pearson_threshold(&neg, 1.0).is_err());

        let low = neyman_pearson_threshold_directed(&neg, 0.05, Direction::Below).unwrap();
        assert_eq!(low.epsilon0, 6.0);
        assert_eq!(low.fpr, 0.05);
    }

    #[test]
    fn neyman_pearson_monotone_in_alpha() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let neg = set(&(0..300)
            .map(|_| rng.random_range(-5.0..5.0))
            .collect::<Vec<_>>());
        let mut prev = f64::INFINITY;
        for i in 1..100 {
            let t = neyman_pearson_threshold(&neg, i as f64 / 100.0).unwrap();
            assert!(t.epsilon0 <= prev);
            assert!(t.fpr <= i as f64 / 100.0 + 1e-12);
            prev = t.epsilon0;
        }
    }

    #[test]
    fn risk_at_matches_label_counting() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..500 {
            let np = rng.random_range(1..=20);
            let nn = rng.random_range(1..=20);
            // integer-valued draws make ties at the threshold common
            let pos: Vec<f64> = (0..np).map(|_| rng.random_range(0..8) as f64).collect();
            let neg: Vec<f64> = (0..nn).map(|_| rng.random_range(0..8) as f64).collect();
            let eps = rng.random_range(-1..9) as f64 + if rng.random::<bool>() { 0.5 } else { 0.0 };
            let prior = rng.random_range(0.05..0.95);
            let r = risk_at(eps, &ecdf(&set(&pos)), &ecdf(&set(&neg)), prior).unwrap();

            let mp = pos.iter().sum::<f64>() / np as f64;
            let mn = neg.iter().sum::<f64>() / nn as f64;
            let up = mp >= mn;
            let call = |v: f64| if up { v > eps } else { v < eps };
            let fn_count = pos.iter().filter(|&&v| !call(v)).count();
            let fp_count = neg.iter().filter(|&&v| call(v)).count();
            assert_eq!(r.fnr, fn_count as f64 / np as f64);
            assert_eq!(r.fpr, fp_count as f64 / nn as f64);
            let total = (1.0 - prior) * r.fpr + prior * r.fnr;
            assert!((r.total_risk - total).abs() < 1e-12);
        }
    }

    #[test]
    fn min_risk_never_exceeds_chance() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..300 {
            let pos: Vec<f64> = (0..rng.random_range(1..30))
                .map(|_| rng.random_range(-3.0..3.0))
                .collect();
            let neg: Vec<f64> = (0..rng.random_range(1..30))
                .map(|_| rng.random_range(-3.0..3.0))
                .collect();
            if let Ok(t) = optimal_threshold(&set(&pos), &set(&neg), 0.5) {
                assert!(t.min_risk.unwrap() <= 0.5);
            }
        }
    }
}
