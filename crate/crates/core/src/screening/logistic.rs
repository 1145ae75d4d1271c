//! One-dimensional logistic regression fitted by Newton–Raphson, used as a
//! reference classifier for control-derived hit thresholds.

use serde::{Deserialize, Serialize};

use super::plate::PlateData;
use crate::error::{Error, Result};
use crate::stats::mean_variance;

pub const MAX_ITERATIONS: usize = 100;
pub const GRADIENT_TOLERANCE: f64 = 1e-8;
pub const RIDGE: f64 = 1e-6;

/// Fitted model `P(y = 1 | x) = sigmoid(weight * x + bias)` in original units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticFit {
    pub weight: f64,
    pub bias: f64,
    pub iterations: usize,
    pub grad_norm: f64,
}

impl LogisticFit {
    /// The probability-0.5 point `-bias / weight`.
    pub fn boundary(&self) -> f64 {
        -self.bias / self.weight
    }

    pub fn predict(&self, x: f64) -> bool {
        self.weight * x + self.bias > 0.0
    }
}

fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

// log(1 + exp(t)) without overflow
fn softplus(t: f64) -> f64 {
    if t > 0.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

/// Penalized negative log-likelihood on standardized inputs.
fn objective(z: &[f64], y: &[f64], w: f64, b: f64) -> f64 {
    let nll: f64 = z
        .iter()
        .zip(y)
        .map(|(&zi, &yi)| {
            let t = w * zi + b;
            softplus(t) - yi * t
        })
        .sum();
    nll + 0.5 * RIDGE * w * w
}

/// Fits a 1-D logistic model with an L2 ridge on the slope.
///
/// Inputs are standardized internally (the ridge acts on the standardized
/// slope); the returned coefficients are mapped back to original units.
pub fn fit_logistic_1d(x: &[f64], y: &[bool]) -> Result<LogisticFit> {
    if x.len() != y.len() || x.is_empty() {
        return Err(Error::InvalidInput(
            "need equally many values and labels".into(),
        ));
    }
    let (mu, var) = mean_variance(x);
    let sd = if var > 0.0 { var.sqrt() } else { 1.0 };
    let z: Vec<f64> = x.iter().map(|v| (v - mu) / sd).collect();
    let t: Vec<f64> = y.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();

    let (mut w, mut b) = (0.0f64, 0.0f64);
    let mut grad_norm = f64::INFINITY;
    for iter in 0..=MAX_ITERATIONS {
        let (mut gw, mut gb) = (RIDGE * w, 0.0);
        let (mut hww, mut hwb, mut hbb) = (RIDGE, 0.0, 0.0);
        for (&zi, &ti) in z.iter().zip(&t) {
            let p = sigmoid(w * zi + b);
            let r = p - ti;
            gw += r * zi;
            gb += r;
            let s = p * (1.0 - p);
            hww += s * zi * zi;
            hwb += s * zi;
            hbb += s;
        }
        grad_norm = gw.hypot(gb);
        if grad_norm < GRADIENT_TOLERANCE {
            return Ok(LogisticFit {
                weight: w / sd,
                bias: b - w * mu / sd,
                iterations: iter,
                grad_norm,
            });
        }
        if iter == MAX_ITERATIONS {
            break;
        }
        let det = hww * hbb - hwb * hwb;
        if det.is_nan() || det <= 0.0 || !det.is_finite() {
            break;
        }
        let dw = (hbb * gw - hwb * gb) / det;
        let db = (hww * gb - hwb * gw) / det;

        // Backtrack until the penalized likelihood stops getting worse.
        let current = objective(&z, &t, w, b);
        let mut step = 1.0;
        loop {
            let (nw, nb) = (w - step * dw, b - step * db);
            if objective(&z, &t, nw, nb) <= current || step < 1e-10 {
                w = nw;
                b = nb;
                break;
            }
            step *= 0.5;
        }
    }
    Err(Error::FitError {
        iterations: MAX_ITERATIONS,
        grad_norm,
    })
}

/// Logistic reference for one train/test plate pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticReference {
    pub logit_boundary: f64,
    /// Fraction of test-plate controls classified correctly.
    pub accuracy: f64,
    /// Fraction of test-plate negative controls called positive.
    pub type1: f64,
    pub fit: LogisticFit,
}

fn control_data(p: &PlateData) -> Result<(Vec<f64>, Vec<bool>)> {
    let pos = p.positive_controls()?;
    let neg = p.negative_controls()?;
    let x: Vec<f64> = pos.values().iter().chain(neg.values()).copied().collect();
    let y: Vec<bool> = std::iter::repeat_n(true, pos.len())
        .chain(std::iter::repeat_n(false, neg.len()))
        .collect();
    Ok((x, y))
}

/// Trains on the controls of `train` (positive = 1) and scores the controls of `test`.
pub fn fit_logistic_reference(train: &PlateData, test: &PlateData) -> Result<LogisticReference> {
    train.validate()?;
    test.validate()?;
    let (x, y) = control_data(train)?;
    let fit = fit_logistic_1d(&x, &y)?;
    let (tx, ty) = control_data(test)?;
    let correct = tx
        .iter()
        .zip(&ty)
        .filter(|(&v, &l)| fit.predict(v) == l)
        .count();
    let negatives = ty.iter().filter(|l| !**l).count();
    let false_pos = tx
        .iter()
        .zip(&ty)
        .filter(|(&v, &l)| !l && fit.predict(v))
        .count();
    Ok(LogisticReference {
        logit_boundary: fit.boundary(),
        accuracy: correct as f64 / tx.len() as f64,
        type1: false_pos as f64 / negatives as f64,
        fit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    // Gradient of the unpenalized log-likelihood in original units, for checking
    // the standardized fit by finite differences of the objective.
    fn nll(x: &[f64], y: &[bool], w: f64, b: f64) -> f64 {
        x.iter()
            .zip(y)
            .map(|(&xi, &yi)| {
                let t = w * xi + b;
                softplus(t) - if yi { t } else { 0.0 }
            })
            .sum()
    }

    #[test]
    fn converges_on_overlapping_classes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let d = Normal::new(0.0, 1.0).unwrap();
        let mut x = Vec::new();
        let mut y = Vec::new();
        for _ in 0..500 {
            x.push(d.sample(&mut rng) + 1.0);
            y.push(true);
            x.push(d.sample(&mut rng) - 1.0);
            y.push(false);
        }
        let fit = fit_logistic_1d(&x, &y).unwrap();
        // Equal-variance normals at +-1: the true log-odds is 2x.
        assert!((fit.weight - 2.0).abs() < 0.3, "{fit:?}");
        assert!(fit.boundary().abs() < 0.15);

        // Stationarity check by central differences in original units.
        let h = 1e-6;
        let gw = (nll(&x, &y, fit.weight + h, fit.bias) - nll(&x, &y, fit.weight - h, fit.bias))
            / (2.0 * h);
        let gb = (nll(&x, &y, fit.weight, fit.bias + h) - nll(&x, &y, fit.weight, fit.bias - h))
            / (2.0 * h);
        assert!(gw.abs() < 1e-3 && gb.abs() < 1e-3, "{gw} {gb}");
    }

    #[test]
    fn separable_data_converges_with_ridge() {
        let x = [0.1, 0.15, 0.2, 0.9, 1.0, 1.1];
        let y = [true, true, true, false, false, false];
        let fit = fit_logistic_1d(&x, &y).unwrap();
        let boundary = fit.boundary();
        assert!(boundary > 0.2 && boundary < 0.9, "{boundary}");
        assert!(x.iter().zip(&y).all(|(&v, &l)| fit.predict(v) == l));
    }

    #[test]
    fn rejects_mismatched_input() {
        assert!(fit_logistic_1d(&[1.0], &[true, false]).is_err());
        assert!(fit_logistic_1d(&[], &[]).is_err());
    }

    #[test]
    fn sigmoid_and_softplus_are_stable() {
        assert_eq!(sigmoid(1000.0), 1.0);
        assert_eq!(sigmoid(-1000.0), 0.0);
        assert_eq!(softplus(1000.0), 1000.0);
        assert_eq!(softplus(-1000.0), 0.0);
        assert!((softplus(0.0) - 2f64.ln()).abs() < 1e-15);
    }
}
