use serde::{Deserialize, Serialize};

use crate::sample::SampleSet;

/// Right-continuous empirical CDF, `F(x) = #{v <= x} / n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(s: &SampleSet) -> Self {
        let mut sorted = s.values().to_vec();
        sorted.sort_unstable_by(f64::total_cmp);
        Self { sorted }
    }

    pub fn sorted_values(&self) -> &[f64] {
        &self.sorted
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// Number of values `<= x`.
    pub fn count_le(&self, x: f64) -> usize {
        self.sorted.partition_point(|&v| v <= x)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.count_le(x) as f64 / self.sorted.len() as f64
    }

    /// Fraction of values strictly above `x`.
    pub fn survival(&self, x: f64) -> f64 {
        (self.sorted.len() - self.count_le(x)) as f64 / self.sorted.len() as f64
    }

    /// Smallest sample value `x` with `F(x) >= p` (lower generalized inverse).
    ///
    /// `p <= 0` returns the minimum, `p >= 1` the maximum.
    pub fn quantile(&self, p: f64) -> f64 {
        let n = self.sorted.len();
        if p <= 0.0 {
            return self.sorted[0];
        }
        let rank = (p * n as f64).ceil() as usize;
        self.sorted[rank.clamp(1, n) - 1]
    }

    pub fn min(&self) -> f64 {
        self.sorted[0]
    }

    pub fn max(&self) -> f64 {
        self.sorted[self.sorted.len() - 1]
    }
}

pub fn ecdf(s: &SampleSet) -> EmpiricalCdf {
    EmpiricalCdf::new(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn step_values() {
        let f = ecdf(&SampleSet::from_values(vec![3.0, 1.0, 2.0]).unwrap());
        assert!((f.eval(2.0) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(f.eval(0.999), 0.0);
        assert_eq!(f.eval(3.0), 1.0);
        assert_eq!(f.eval(1e9), 1.0);
        assert_eq!(f.eval(f64::NEG_INFINITY), 0.0);
        assert_eq!(f.eval(f64::INFINITY), 1.0);
        assert_eq!(f.survival(1.0), 2.0 / 3.0);
    }

    #[test]
    fn quantile_is_lower_inverse() {
        let f = ecdf(&SampleSet::from_values((1..=100).map(f64::from).collect()).unwrap());
        assert_eq!(f.quantile(0.95), 95.0);
        assert_eq!(f.quantile(0.951), 96.0);
        assert_eq!(f.quantile(0.0), 1.0);
        assert_eq!(f.quantile(1.0), 100.0);
        assert_eq!(f.quantile(0.005), 1.0);
    }

    #[test]
    fn uniform_sup_distance_within_ks_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let v: Vec<f64> = (0..1000).map(|_| rng.random::<f64>()).collect();
        let f = ecdf(&SampleSet::from_values(v).unwrap());
        // The supremum is attained at jump points: check both sides of each.
        let n = f.len() as f64;
        let sup = f
            .sorted_values()
            .iter()
            .enumerate()
            .map(|(i, &x)| ((i + 1) as f64 / n - x).abs().max((x - i as f64 / n).abs()))
            .fold(0.0, f64::max);
        assert!(sup < 0.06, "sup distance {sup}");
    }
}
