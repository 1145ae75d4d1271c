//! Overlap coefficient (OVL) estimators and the GSSMD effect size built on them.
//!
//! OVL is the integral of the pointwise minimum of two densities: 1 for
//! identical distributions, 0 for disjoint ones. GSSMD is
//! `sign(mean_pos - mean_neg) * (1 - OVL)`, a bounded effect size in `[-1, 1]`.

mod ecdf;
mod histogram;
mod kde;

pub use ecdf::{ecdf, EmpiricalCdf};
pub use histogram::{build_common_histograms, histogram_overlap, sturges_bins, Histogram};
pub use kde::{kde_overlap, silverman_bandwidth, KdeOverlap, GRID_POINTS};

use libm::erfc;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sample::SampleSet;
use crate::stats::mean_variance;

/// Standard normal CDF.
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// How the histogram bin count is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BinRule {
    /// Sturges rule applied to the smaller group size.
    #[default]
    Auto,
    Fixed(usize),
}

impl BinRule {
    pub fn resolve(self, n_a: usize, n_b: usize) -> Result<usize> {
        match self {
            BinRule::Auto => sturges_bins(n_a.min(n_b)),
            BinRule::Fixed(0) => Err(Error::InvalidInput("bin count must be at least 1".into())),
            BinRule::Fixed(k) => Ok(k),
        }
    }
}

/// Estimator selection with its tuning parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum OverlapMethod {
    Histogram {
        bins: BinRule,
    },
    ParametricNormal,
    /// `None` selects Silverman's rule per group.
    Kde {
        bandwidth: Option<f64>,
    },
}

impl Default for OverlapMethod {
    fn default() -> Self {
        OverlapMethod::Histogram {
            bins: BinRule::Auto,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodKind {
    Histogram,
    ParametricNormal,
    Kde,
}

/// Parameters actually used by an estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OverlapParams {
    Histogram {
        bins: usize,
    },
    ParametricNormal {
        mean_a: f64,
        mean_b: f64,
        sd_a: f64,
        sd_b: f64,
        pooled_sd: f64,
    },
    Kde {
        bandwidth_a: f64,
        bandwidth_b: f64,
        grid_points: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OverlapEstimate {
    pub ovl: f64,
    pub method: MethodKind,
    pub params: OverlapParams,
}

pub fn ovl_histogram(a: &SampleSet, b: &SampleSet, bins: BinRule) -> Result<OverlapEstimate> {
    let k = bins.resolve(a.len(), b.len())?;
    let (ha, hb) = build_common_histograms(a, b, k)?;
    Ok(OverlapEstimate {
        ovl: histogram_overlap(&ha, &hb),
        method: MethodKind::Histogram,
        params: OverlapParams::Histogram { bins: ha.bins() },
    })
}

/// `2 Φ(-|mean_a - mean_b| / (2 s_pooled))`, exact for equal-variance normals.
pub fn ovl_parametric_normal(a: &SampleSet, b: &SampleSet) -> Result<OverlapEstimate> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::InvalidInput(
            "parametric overlap needs at least two values per group".into(),
        ));
    }
    let (mean_a, var_a) = mean_variance(a.values());
    let (mean_b, var_b) = mean_variance(b.values());
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let pooled_sd = (((na - 1.0) * var_a + (nb - 1.0) * var_b) / (na + nb - 2.0)).sqrt();
    if pooled_sd == 0.0 {
        return Err(Error::DegenerateVariance);
    }
    Ok(OverlapEstimate {
        ovl: parametric_normal_ovl((mean_a - mean_b).abs(), pooled_sd),
        method: MethodKind::ParametricNormal,
        params: OverlapParams::ParametricNormal {
            mean_a,
            mean_b,
            sd_a: var_a.sqrt(),
            sd_b: var_b.sqrt(),
            pooled_sd,
        },
    })
}

/// Closed-form overlap of two normals with common sd and the given mean gap.
pub fn parametric_normal_ovl(mean_gap: f64, sd: f64) -> f64 {
    (2.0 * std_normal_cdf(-mean_gap.abs() / (2.0 * sd))).clamp(0.0, 1.0)
}

pub fn ovl_kde(a: &SampleSet, b: &SampleSet, bandwidth: Option<f64>) -> Result<OverlapEstimate> {
    let r = kde_overlap(a, b, bandwidth)?;
    Ok(OverlapEstimate {
        ovl: r.ovl,
        method: MethodKind::Kde,
        params: OverlapParams::Kde {
            bandwidth_a: r.bandwidth_a,
            bandwidth_b: r.bandwidth_b,
            grid_points: GRID_POINTS,
        },
    })
}

pub fn ovl(a: &SampleSet, b: &SampleSet, method: OverlapMethod) -> Result<OverlapEstimate> {
    match method {
        OverlapMethod::Histogram { bins } => ovl_histogram(a, b, bins),
        OverlapMethod::ParametricNormal => ovl_parametric_normal(a, b),
        OverlapMethod::Kde { bandwidth } => ovl_kde(a, b, bandwidth),
    }
}

/// Sign of the mean difference, with a tie counted as positive.
pub fn direction(mean_pos: f64, mean_neg: f64) -> f64 {
    if mean_pos - mean_neg < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// GSSMD from an already computed overlap.
pub fn gssmd_from_ovl(mean_pos: f64, mean_neg: f64, ovl: f64) -> f64 {
    direction(mean_pos, mean_neg) * (1.0 - ovl)
}

/// `sign(mean_pos - mean_neg) * (1 - OVL)` together with the overlap estimate used.
pub fn gssmd_with_estimate(
    pos: &SampleSet,
    neg: &SampleSet,
    method: OverlapMethod,
) -> Result<(f64, OverlapEstimate)> {
    let est = ovl(pos, neg, method)?;
    let (mean_pos, _) = mean_variance(pos.values());
    let (mean_neg, _) = mean_variance(neg.values());
    Ok((gssmd_from_ovl(mean_pos, mean_neg, est.ovl), est))
}

pub fn gssmd(pos: &SampleSet, neg: &SampleSet, method: OverlapMethod) -> Result<f64> {
    gssmd_with_estimate(pos, neg, method).map(|(g, _)| g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    const HIST: OverlapMethod = OverlapMethod::Histogram {
        bins: BinRule::Auto,
    };

    fn set(v: &[f64]) -> SampleSet {
        SampleSet::from_values(v.to_vec()).unwrap()
    }

    fn normal_set(n: usize, mu: f64, sd: f64, seed: u64) -> SampleSet {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = Normal::new(mu, sd).unwrap();
        set(&(0..n).map(|_| d.sample(&mut rng)).collect::<Vec<_>>())
    }

    // Composite Simpson integral of min(N(0,1), N(d,1)) over [-12, d + 12].
    fn simpson_min_normal_overlap(d: f64) -> f64 {
        let pdf =
            |x: f64, m: f64| (-(x - m) * (x - m) / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let f = |x: f64| pdf(x, 0.0).min(pdf(x, d));
        let (lo, hi, panels) = (-12.0, d + 12.0, 20_000usize);
        let h = (hi - lo) / panels as f64;
        let mut acc = f(lo) + f(hi);
        for i in 1..panels {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * f(lo + h * i as f64);
        }
        acc * h / 3.0
    }

    #[test]
    fn normal_cdf_reference_values() {
        assert_eq!(std_normal_cdf(0.0), 0.5);
        // Φ(-1) and Φ(-5) from standard tables
        assert!((std_normal_cdf(-1.0) - 0.158_655_253_931_457_05).abs() < 1e-15);
        assert!((std_normal_cdf(-5.0) - 2.866_515_718_791_939e-7).abs() < 1e-19);
    }

    #[test]
    fn oracle_two_phi_minus_one() {
        let oracle = simpson_min_normal_overlap(2.0);
        assert!((oracle - 0.317_310_507_862_914).abs() < 1e-9, "{oracle}");
        assert!((parametric_normal_ovl(2.0, 1.0) - oracle).abs() < 1e-9);
        assert!(parametric_normal_ovl(10.0, 1.0) < 1e-6);
        assert_eq!(parametric_normal_ovl(0.0, 1.0), 1.0);
    }

    #[test]
    fn identical_samples_overlap_fully() {
        let a = normal_set(500, 0.0, 1.0, 1);
        assert_eq!(ovl_histogram(&a, &a, BinRule::Auto).unwrap().ovl, 1.0);
        assert_eq!(ovl_parametric_normal(&a, &a).unwrap().ovl, 1.0);
        assert!((ovl_kde(&a, &a, None).unwrap().ovl - 1.0).abs() < 1e-9);
        assert_eq!(gssmd(&a, &a, HIST).unwrap(), 0.0);
    }

    #[test]
    fn disjoint_samples() {
        let a = set(&[0.0, 0.0, 0.0]);
        let b = set(&[10.0, 10.0, 10.0]);
        assert_eq!(ovl_histogram(&a, &b, BinRule::Fixed(2)).unwrap().ovl, 0.0);
        assert_eq!(gssmd(&b, &a, HIST).unwrap(), 1.0);
        assert_eq!(gssmd(&a, &b, HIST).unwrap(), -1.0);

        let a = normal_set(200, 0.0, 1.0, 2);
        let b = normal_set(200, 100.0, 1.0, 3);
        assert!(ovl_kde(&a, &b, None).unwrap().ovl < 1e-3);
    }

    #[test]
    fn large_sample_estimators_track_analytic_value() {
        let target = 2.0 * std_normal_cdf(-1.0);
        let a = normal_set(100_000, 0.0, 1.0, 4);
        let b = normal_set(100_000, 2.0, 1.0, 5);
        let h = ovl_histogram(&a, &b, BinRule::Auto).unwrap();
        assert!((h.ovl - target).abs() < 0.03, "{}", h.ovl);
        assert_eq!(h.params, OverlapParams::Histogram { bins: 18 });

        let a = normal_set(10_000, 0.0, 1.0, 6);
        let b = normal_set(10_000, 2.0, 1.0, 7);
        let k = ovl_kde(&a, &b, None).unwrap();
        assert!((k.ovl - target).abs() < 0.03, "{}", k.ovl);
        let p = ovl_parametric_normal(&a, &b).unwrap();
        assert!((p.ovl - target).abs() < 0.03, "{}", p.ovl);
    }

    #[test]
    fn saturates_at_large_shift() {
        let pos = normal_set(1000, 10.0, 1.0, 8);
        let neg = normal_set(1000, 0.0, 1.0, 9);
        let g = gssmd(&pos, &neg, HIST).unwrap();
        assert!((g - 1.0).abs() <= 0.02, "{g}");
    }

    #[test]
    fn parametric_requires_spread() {
        let a = set(&[1.0, 1.0]);
        let b = set(&[2.0, 2.0]);
        assert_eq!(
            ovl_parametric_normal(&a, &b),
            Err(Error::DegenerateVariance)
        );
        assert!(matches!(
            ovl_parametric_normal(&set(&[1.0]), &b),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn parametric_strictly_decreasing_in_gap() {
        let mut prev = parametric_normal_ovl(0.0, 1.0);
        for i in 1..=80 {
            let cur = parametric_normal_ovl(i as f64 * 0.1, 1.0);
            assert!(cur < prev);
            prev = cur;
        }
    }

    #[test]
    fn mean_histogram_gssmd_increases_with_shift() {
        let mut means = Vec::new();
        for (j, shift) in [0.0, 1.0, 2.0, 5.0, 10.0].into_iter().enumerate() {
            let total: f64 = (0..200)
                .map(|t| {
                    let seed = 1000 * j as u64 + t;
                    let neg = normal_set(1000, 0.0, 1.0, 2 * seed);
                    let pos = normal_set(1000, shift, 1.0, 2 * seed + 1);
                    gssmd(&pos, &neg, HIST).unwrap()
                })
                .sum();
            means.push(total / 200.0);
        }
        assert!(means.windows(2).all(|w| w[0] < w[1]), "{means:?}");
    }

    #[test]
    fn histogram_and_parametric_agree_for_large_normal_samples() {
        for (i, shift) in [0.0, 1.0, 2.0, 3.0].into_iter().enumerate() {
            let a = normal_set(100_000, 0.0, 1.0, 50 + i as u64);
            let b = normal_set(100_000, shift, 1.0, 60 + i as u64);
            let h = ovl_histogram(&a, &b, BinRule::Auto).unwrap().ovl;
            let p = ovl_parametric_normal(&a, &b).unwrap().ovl;
            assert!((h - p).abs() < 0.05, "shift {shift}: {h} vs {p}");
        }
    }

    fn group() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-20.0f64..20.0, 2..50)
    }

    proptest! {
        #[test]
        fn bounded_and_antisymmetric(a in group(), b in group()) {
            let (sa, sb) = (set(&a), set(&b));
            for m in [HIST, OverlapMethod::Kde { bandwidth: None }] {
                let e = ovl(&sa, &sb, m).unwrap();
                prop_assert!((0.0..=1.0).contains(&e.ovl));
                let g = gssmd(&sa, &sb, m).unwrap();
                prop_assert!((-1.0..=1.0).contains(&g));
            }
            let g1 = gssmd(&sa, &sb, HIST).unwrap();
            let g2 = gssmd(&sb, &sa, HIST).unwrap();
            if g1 != 0.0 && mean_variance(&a).0 != mean_variance(&b).0 {
                prop_assert_eq!(g1, -g2);
            }
        }

        #[test]
        fn translation_invariance(a in group(), b in group(), c in -100.0f64..100.0) {
            let (sa, sb) = (set(&a), set(&b));
            let (ta, tb) = (sa.map(|x| x + c).unwrap(), sb.map(|x| x + c).unwrap());
            if let (Ok(p0), Ok(p1)) = (ovl_parametric_normal(&sa, &sb), ovl_parametric_normal(&ta, &tb)) {
                prop_assert!((p0.ovl - p1.ovl).abs() < 1e-9);
            }
            let h0 = ovl_histogram(&sa, &sb, BinRule::Auto).unwrap().ovl;
            let h1 = ovl_histogram(&ta, &tb, BinRule::Auto).unwrap().ovl;
            prop_assert!((h0 - h1).abs() < 1e-12);
        }
    }
}
