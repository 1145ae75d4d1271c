use crate::error::{Error, Result};
use crate::sample::SampleSet;
use crate::stats::mean_variance;

pub const GRID_POINTS: usize = 512;

const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Silverman's rule of thumb, `0.9 * min(sd, IQR / 1.34) * n^(-1/5)`.
///
/// Falls back to the sd when the IQR is zero, and to a unit-scale width for
/// constant samples so the estimate stays defined.
pub fn silverman_bandwidth(s: &SampleSet) -> f64 {
    let v = s.values();
    let (mean, var) = mean_variance(v);
    let sd = var.sqrt();
    let mut sorted = v.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let iqr = interpolated_quantile(&sorted, 0.75) - interpolated_quantile(&sorted, 0.25);
    let spread = match (sd > 0.0, iqr > 0.0) {
        (true, true) => sd.min(iqr / 1.34),
        (true, false) => sd,
        (false, _) => 1e-3 * mean.abs().max(1.0),
    };
    0.9 * spread * (v.len() as f64).powf(-0.2)
}

// Linear interpolation between order statistics (type 7).
fn interpolated_quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn density_on_grid(values: &[f64], h: f64, grid: &[f64]) -> Vec<f64> {
    let norm = INV_SQRT_2PI / (values.len() as f64 * h);
    grid.iter()
        .map(|&x| {
            values
                .iter()
                .map(|&v| {
                    let z = (x - v) / h;
                    (-0.5 * z * z).exp()
                })
                .sum::<f64>()
                * norm
        })
        .collect()
}

fn trapezoid(ys: &[f64], step: f64) -> f64 {
    let inner: f64 = ys[1..ys.len() - 1].iter().sum();
    step * (inner + 0.5 * (ys[0] + ys[ys.len() - 1]))
}

/// Result of a KDE overlap computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KdeOverlap {
    pub ovl: f64,
    pub bandwidth_a: f64,
    pub bandwidth_b: f64,
}

/// Gaussian-KDE overlap on a shared 512-point grid spanning `[min - 3h, max + 3h]`.
///
/// Each density is rescaled to unit trapezoidal mass on the grid before the
/// pointwise minimum is integrated.
pub fn kde_overlap(a: &SampleSet, b: &SampleSet, bandwidth: Option<f64>) -> Result<KdeOverlap> {
    let (ha, hb) = match bandwidth {
        Some(h) if h > 0.0 && h.is_finite() => (h, h),
        Some(h) => {
            return Err(Error::InvalidInput(format!(
                "bandwidth must be positive and finite, got {h}"
            )))
        }
        None => (silverman_bandwidth(a), silverman_bandwidth(b)),
    };
    let h = ha.max(hb);
    let lo = a.min().min(b.min()) - 3.0 * h;
    let hi = a.max().max(b.max()) + 3.0 * h;
    let step = (hi - lo) / (GRID_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..GRID_POINTS).map(|i| lo + step * i as f64).collect();

    let normalized = |values: &[f64], h: f64| {
        let mut f = density_on_grid(values, h, &grid);
        let mass = trapezoid(&f, step);
        f.iter_mut().for_each(|y| *y /= mass);
        f
    };
    let fa = normalized(a.values(), ha);
    let fb = normalized(b.values(), hb);
    let lower: Vec<f64> = fa.iter().zip(&fb).map(|(x, y)| x.min(*y)).collect();
    Ok(KdeOverlap {
        ovl: trapezoid(&lower, step).clamp(0.0, 1.0),
        bandwidth_a: ha,
        bandwidth_b: hb,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn silverman_on_known_sample() {
        // sd = sqrt(2.5), IQR (type 7) = 2, n = 5
        let s = SampleSet::from_values(vec![0.0, 1.0, 2.0, 3.0, 4.0]).unwrap();
        let expected = 0.9 * (2.0f64 / 1.34).min(2.5f64.sqrt()) * 5f64.powf(-0.2);
        assert!((silverman_bandwidth(&s) - expected).abs() < 1e-15);
    }

    #[test]
    fn constant_sample_has_positive_bandwidth() {
        let s = SampleSet::from_values(vec![3.0; 10]).unwrap();
        assert!(silverman_bandwidth(&s) > 0.0);
        let r = kde_overlap(&s, &s, None).unwrap();
        assert!((r.ovl - 1.0).abs() < 1e-9);
    }

    #[test]
    fn bad_bandwidth() {
        let s = SampleSet::from_values(vec![0.0, 1.0]).unwrap();
        assert!(kde_overlap(&s, &s, Some(0.0)).is_err());
        assert!(kde_overlap(&s, &s, Some(-1.0)).is_err());
        assert!(kde_overlap(&s, &s, Some(f64::NAN)).is_err());
    }

    #[test]
    fn trapezoid_of_line() {
        let ys = [0.0, 1.0, 2.0, 3.0];
        assert!((trapezoid(&ys, 1.0) - 4.5).abs() < 1e-15);
    }
}
