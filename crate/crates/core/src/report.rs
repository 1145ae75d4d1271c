use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::overlap::{direction, OverlapEstimate, OverlapMethod};
use crate::sample::SampleSet;
use crate::stats::{self, summarize, SummaryStats};

/// Names of the five compared measures, in report order.
pub const MEASURES: [&str; 5] = [
    "z_factor",
    "ssmd",
    "robust_z_factor",
    "robust_ssmd",
    "gssmd",
];

/// All five effect-size measures on one (positive, negative) pair.
///
/// A measure that is undefined for the input (for instance SSMD with two
/// zero-variance groups) is `None` and its reason is listed in `issues`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectSizeReport {
    pub n_pos: usize,
    pub n_neg: usize,
    pub pos: SummaryStats,
    pub neg: SummaryStats,
    pub z_factor: Option<f64>,
    pub ssmd: Option<f64>,
    pub robust_z_factor: Option<f64>,
    pub robust_ssmd: Option<f64>,
    pub gssmd: Option<f64>,
    pub overlap: Option<OverlapEstimate>,
    pub issues: Vec<String>,
}

impl EffectSizeReport {
    /// Measures in [`MEASURES`] order.
    pub fn values(&self) -> [Option<f64>; 5] {
        [
            self.z_factor,
            self.ssmd,
            self.robust_z_factor,
            self.robust_ssmd,
            self.gssmd,
        ]
    }
}

fn keep(name: &str, r: Result<f64>, issues: &mut Vec<String>) -> Option<f64> {
    match r {
        Ok(v) => Some(v),
        Err(e) => {
            issues.push(format!("{name}: {e}"));
            None
        }
    }
}

pub fn effect_size_report(
    pos: &SampleSet,
    neg: &SampleSet,
    method: OverlapMethod,
) -> EffectSizeReport {
    let (ps, ns) = (summarize(pos), summarize(neg));
    let mut issues = Vec::new();
    let z_factor = keep("z_factor", stats::z_factor_from(&ps, &ns), &mut issues);
    let ssmd = keep("ssmd", stats::ssmd_from(&ps, &ns), &mut issues);
    let robust_z_factor = keep(
        "robust_z_factor",
        stats::robust_z_factor_from(&ps, &ns),
        &mut issues,
    );
    let robust_ssmd = keep(
        "robust_ssmd",
        stats::robust_ssmd_from(&ps, &ns),
        &mut issues,
    );
    let overlap = match crate::overlap::ovl(pos, neg, method) {
        Ok(e) => Some(e),
        Err(e) => {
            issues.push(format!("gssmd: {e}"));
            None
        }
    };
    let gssmd = overlap.map(|e| direction(ps.mean, ns.mean) * (1.0 - e.ovl));
    EffectSizeReport {
        n_pos: pos.len(),
        n_neg: neg.len(),
        pos: ps,
        neg: ns,
        z_factor,
        ssmd,
        robust_z_factor,
        robust_ssmd,
        gssmd,
        overlap,
        issues,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::overlap::gssmd;

    #[test]
    fn matches_direct_calls() {
        let pos = SampleSet::from_values(vec![3.0, 4.5, 5.0, 6.1, 7.0]).unwrap();
        let neg = SampleSet::from_values(vec![0.0, 1.2, 2.0, 2.5, 4.0]).unwrap();
        let m = OverlapMethod::default();
        let r = effect_size_report(&pos, &neg, m);
        assert_eq!(r.ssmd, Some(stats::ssmd(&pos, &neg).unwrap()));
        assert_eq!(r.robust_ssmd, Some(stats::robust_ssmd(&pos, &neg).unwrap()));
        assert_eq!(r.z_factor, Some(stats::z_factor(&pos, &neg).unwrap()));
        assert_eq!(
            r.robust_z_factor,
            Some(stats::robust_z_factor(&pos, &neg).unwrap())
        );
        assert_eq!(r.gssmd, Some(gssmd(&pos, &neg, m).unwrap()));
        assert!(r.issues.is_empty());
    }

    #[test]
    fn degenerate_measures_are_null() {
        let a = SampleSet::from_values(vec![1.0, 1.0]).unwrap();
        let r = effect_size_report(&a, &a, OverlapMethod::ParametricNormal);
        assert_eq!(r.values(), [None; 5]);
        assert_eq!(r.issues.len(), 5);
        let r = effect_size_report(&a, &a, OverlapMethod::default());
        assert_eq!(r.gssmd, Some(0.0));
    }
}
