//! Seeded Monte Carlo studies of the effect-size measures.
//!
//! Three experiments are provided: a mean-shift study over several background
//! spreads, an outlier-contamination study with no true population difference,
//! and a null study measuring how far GSSMD strays from zero by sample size.
//! Every trial draws from its own generator stream, so tables are identical for
//! any worker count.

mod rng;
mod table;

pub use rng::{sample_lognormal, sample_normal, trial_rng};
pub use table::{aggregate, pairwise_sum, Aggregate, CellKey, MeasureRow, MeasureTable};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::overlap::{direction, ovl, OverlapMethod};
use crate::report::MEASURES;
use crate::sample::SampleSet;
use crate::stats::{self, mean_variance, summarize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimDistribution {
    #[default]
    Normal,
    /// `exp` of a normal with the given location and scale.
    Lognormal,
}

impl SimDistribution {
    pub fn name(self) -> &'static str {
        match self {
            SimDistribution::Normal => "normal",
            SimDistribution::Lognormal => "lognormal",
        }
    }

    fn draw<R: Rng + ?Sized>(self, n: usize, mu: f64, sigma: f64, rng: &mut R) -> Vec<f64> {
        let mut v = rng::normal_values(n, mu, sigma, rng);
        if self == SimDistribution::Lognormal {
            v.iter_mut().for_each(|x| *x = x.exp());
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub trials: usize,
    pub n_per_group: usize,
    pub seed: u64,
    pub distribution: SimDistribution,
    pub method: OverlapMethod,
    /// Background spreads for the shift experiment.
    pub sigmas: Vec<f64>,
    /// Mean differences for the shift experiment.
    pub shifts: Vec<f64>,
    pub outlier_fractions: Vec<f64>,
    /// Outlier locations; outliers always have unit spread.
    pub outlier_means: Vec<f64>,
    /// Group sizes for the null experiment.
    pub sample_sizes: Vec<usize>,
    /// Worker threads; `None` uses the ambient rayon pool. Never affects results.
    #[serde(skip)]
    pub workers: Option<usize>,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            trials: 10_000,
            n_per_group: 1000,
            seed: 0,
            distribution: SimDistribution::Normal,
            method: OverlapMethod::default(),
            sigmas: vec![1.0, 3.0, 5.0],
            shifts: vec![0.0, 1.0, 2.0, 5.0, 10.0],
            outlier_fractions: vec![0.0, 0.05, 0.10, 0.20, 0.30],
            outlier_means: vec![0.0, 1.0, 2.0, 5.0, 10.0, 20.0],
            sample_sizes: vec![3, 10, 30, 100, 300, 1000, 10_000, 100_000],
            workers: None,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidInput(m));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.n_per_group < 2 {
            return bad("n_per_group must be at least 2".into());
        }
        if let Some(s) = self.sigmas.iter().find(|s| !(**s > 0.0 && s.is_finite())) {
            return bad(format!("sigma must be positive, got {s}"));
        }
        if let Some(f) = self
            .outlier_fractions
            .iter()
            .find(|f| !(0.0..=1.0).contains(*f))
        {
            return bad(format!("outlier fraction must lie in [0, 1], got {f}"));
        }
        if self
            .shifts
            .iter()
            .chain(&self.outlier_means)
            .any(|x| !x.is_finite())
        {
            return bad("shifts and outlier means must be finite".into());
        }
        if let Some(n) = self.sample_sizes.iter().find(|n| **n < 2) {
            return bad(format!("sample sizes must be at least 2, got {n}"));
        }
        if self.workers == Some(0) {
            return bad("workers must be at least 1".into());
        }
        Ok(())
    }

    fn run_trials<T, F>(&self, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self.workers {
            Some(1) => Ok((0..self.trials).map(&f).collect()),
            Some(k) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(k)
                    .build()
                    .map_err(|e| Error::InvalidInput(e.to_string()))?;
                Ok(pool.install(|| (0..self.trials).into_par_iter().map(&f).collect()))
            }
            None => Ok((0..self.trials).into_par_iter().map(&f).collect()),
        }
    }
}

/// The five measures for one simulated pair, in [`MEASURES`] order.
pub fn trial_measures(pos: Vec<f64>, neg: Vec<f64>, method: OverlapMethod) -> [Option<f64>; 5] {
    let (Ok(pos), Ok(neg)) = (SampleSet::from_values(pos), SampleSet::from_values(neg)) else {
        return [None; 5];
    };
    let (ps, ns) = (summarize(&pos), summarize(&neg));
    let g = ovl(&pos, &neg, method)
        .ok()
        .map(|e| direction(ps.mean, ns.mean) * (1.0 - e.ovl));
    [
        stats::z_factor_from(&ps, &ns).ok(),
        stats::ssmd_from(&ps, &ns).ok(),
        stats::robust_z_factor_from(&ps, &ns).ok(),
        stats::robust_ssmd_from(&ps, &ns).ok(),
        g,
    ]
}

fn gssmd_only(pos: Vec<f64>, neg: Vec<f64>, method: OverlapMethod) -> Option<f64> {
    let pos = SampleSet::from_values(pos).ok()?;
    let neg = SampleSet::from_values(neg).ok()?;
    let e = ovl(&pos, &neg, method).ok()?;
    let mp = mean_variance(pos.values()).0;
    let mn = mean_variance(neg.values()).0;
    Some(direction(mp, mn) * (1.0 - e.ovl))
}

fn five_measure_rows(cell: CellKey, per_trial: &[[Option<f64>; 5]], rows: &mut Vec<MeasureRow>) {
    for (m, name) in MEASURES.iter().enumerate() {
        let column: Vec<Option<f64>> = per_trial.iter().map(|t| t[m]).collect();
        rows.push(MeasureRow {
            cell: cell.clone(),
            measure: (*name).to_string(),
            stats: aggregate(&column),
        });
    }
}

fn table(cfg: &SimConfig, experiment: &str, rows: Vec<MeasureRow>) -> MeasureTable {
    MeasureTable {
        experiment: experiment.into(),
        distribution: cfg.distribution.name().into(),
        trials: cfg.trials,
        seed: cfg.seed,
        rows,
    }
}

/// Background vs. shifted target, for every (sigma, shift) pair.
///
/// The target is an independent draw from the background distribution plus the shift.
pub fn run_shift_experiment(cfg: &SimConfig) -> Result<MeasureTable> {
    cfg.validate()?;
    let mut rows = Vec::new();
    let cells = cfg
        .sigmas
        .iter()
        .flat_map(|&s| cfg.shifts.iter().map(move |&d| (s, d)));
    for (cell, (sigma, shift)) in cells.enumerate() {
        let n = cfg.n_per_group;
        let per_trial = cfg.run_trials(|t| {
            let mut rng = trial_rng(cfg.seed, cell, t);
            let neg = cfg.distribution.draw(n, 0.0, sigma, &mut rng);
            let mut pos = cfg.distribution.draw(n, 0.0, sigma, &mut rng);
            pos.iter_mut().for_each(|x| *x += shift);
            trial_measures(pos, neg, cfg.method)
        })?;
        let key = CellKey {
            sigma: Some(sigma),
            shift: Some(shift),
            n,
            ..CellKey::default()
        };
        five_measure_rows(key, &per_trial, &mut rows);
    }
    Ok(table(cfg, "shift", rows))
}

/// Both groups from the same unit-scale distribution, with the first
/// `floor(fraction * n)` positives replaced by `N(outlier_mean, 1)` draws.
pub fn run_outlier_experiment(cfg: &SimConfig) -> Result<MeasureTable> {
    cfg.validate()?;
    let mut rows = Vec::new();
    let cells = cfg
        .outlier_fractions
        .iter()
        .flat_map(|&f| cfg.outlier_means.iter().map(move |&m| (f, m)));
    for (cell, (fraction, mu_out)) in cells.enumerate() {
        let n = cfg.n_per_group;
        let replaced = (fraction * n as f64).floor() as usize;
        let per_trial = cfg.run_trials(|t| {
            let mut rng = trial_rng(cfg.seed, cell, t);
            let neg = cfg.distribution.draw(n, 0.0, 1.0, &mut rng);
            let mut pos = cfg.distribution.draw(n, 0.0, 1.0, &mut rng);
            let outliers = rng::normal_values(replaced, mu_out, 1.0, &mut rng);
            pos[..replaced].copy_from_slice(&outliers);
            trial_measures(pos, neg, cfg.method)
        })?;
        let key = CellKey {
            outlier_fraction: Some(fraction),
            outlier_mean: Some(mu_out),
            n,
            ..CellKey::default()
        };
        five_measure_rows(key, &per_trial, &mut rows);
    }
    Ok(table(cfg, "outlier", rows))
}

/// GSSMD between two samples of the same distribution, per sample size.
///
/// Emits `gssmd` and `abs_gssmd` rows; the `q95` of the latter is the null bound.
pub fn run_null_bound_experiment(cfg: &SimConfig) -> Result<MeasureTable> {
    cfg.validate()?;
    let mut rows = Vec::new();
    for (cell, &n) in cfg.sample_sizes.iter().enumerate() {
        let per_trial = cfg.run_trials(|t| {
            let mut rng = trial_rng(cfg.seed, cell, t);
            let a = cfg.distribution.draw(n, 0.0, 1.0, &mut rng);
            let b = cfg.distribution.draw(n, 0.0, 1.0, &mut rng);
            gssmd_only(a, b, cfg.method)
        })?;
        let key = CellKey {
            n,
            ..CellKey::default()
        };
        let abs: Vec<Option<f64>> = per_trial.iter().map(|g| g.map(f64::abs)).collect();
        rows.push(MeasureRow {
            cell: key.clone(),
            measure: "gssmd".into(),
            stats: aggregate(&per_trial),
        });
        rows.push(MeasureRow {
            cell: key,
            measure: "abs_gssmd".into(),
            stats: aggregate(&abs),
        });
    }
    Ok(table(cfg, "null_bound", rows))
}

/// Per-trial GSSMD values for one null cell, in trial order.
pub fn null_gssmd_trials(cfg: &SimConfig, n: usize) -> Result<Vec<Option<f64>>> {
    cfg.validate()?;
    cfg.run_trials(|t| {
        let mut rng = trial_rng(cfg.seed, 0, t);
        let a = cfg.distribution.draw(n, 0.0, 1.0, &mut rng);
        let b = cfg.distribution.draw(n, 0.0, 1.0, &mut rng);
        gssmd_only(a, b, cfg.method)
    })
}
