use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::plate::{PlateData, Well, WellType};
use crate::error::{Error, Result};

/// Shape of a generated plate. Defaults mimic a viability screen: tight
/// positive controls at low signal, negatives near 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticPlateConfig {
    pub plate_id: String,
    pub rows: u32,
    pub cols: u32,
    pub n_pos: usize,
    pub n_neg: usize,
    pub pos_mean: f64,
    pub pos_sd: f64,
    pub neg_mean: f64,
    pub neg_sd: f64,
    /// Fraction of sample wells planted as true hits, drawn like positive controls.
    pub hit_fraction: f64,
    pub seed: u64,
}

impl Default for SyntheticPlateConfig {
    fn default() -> Self {
        Self {
            plate_id: "plate1".into(),
            rows: 16,
            cols: 24,
            n_pos: 32,
            n_neg: 32,
            pos_mean: 0.2,
            pos_sd: 0.05,
            neg_mean: 1.0,
            neg_sd: 0.1,
            hit_fraction: 0.1,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticPlate {
    pub plate: PlateData,
    /// Ground truth for sample wells, keyed by well id.
    pub truth: BTreeMap<String, bool>,
}

fn well_name(row: u32, col: u32) -> String {
    let mut letters = String::new();
    let mut r = row;
    loop {
        letters.insert(0, (b'A' + (r % 26) as u8) as char);
        if r < 26 {
            break;
        }
        r = r / 26 - 1;
    }
    format!("{letters}{:02}", col + 1)
}

/// Generates a plate with controls in the first two columns' worth of wells
/// and the rest filled with samples, a planted fraction of which are hits.
pub fn synthetic_plate(cfg: &SyntheticPlateConfig) -> Result<SyntheticPlate> {
    let total = cfg.rows as usize * cfg.cols as usize;
    if cfg.n_pos + cfg.n_neg > total {
        return Err(Error::InvalidInput("more controls than wells".into()));
    }
    if !(0.0..=1.0).contains(&cfg.hit_fraction) {
        return Err(Error::InvalidInput(
            "hit fraction must lie in [0, 1]".into(),
        ));
    }
    let dist = |m: f64, s: f64| {
        if s.is_nan() || s <= 0.0 || !m.is_finite() {
            return Err(Error::InvalidInput(format!(
                "bad distribution N({m}, {s}^2)"
            )));
        }
        Normal::new(m, s).map_err(|e| Error::InvalidInput(format!("bad distribution: {e}")))
    };
    let pos = dist(cfg.pos_mean, cfg.pos_sd)?;
    let neg = dist(cfg.neg_mean, cfg.neg_sd)?;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n_samples = total - cfg.n_pos - cfg.n_neg;
    let n_hits = (cfg.hit_fraction * n_samples as f64).round() as usize;
    let mut planted: Vec<bool> = (0..n_samples).map(|i| i < n_hits).collect();
    planted.shuffle(&mut rng);

    let mut wells = Vec::with_capacity(total);
    let mut truth = BTreeMap::new();
    let mut samples = planted.into_iter();
    // Column-major fill so controls occupy the leftmost columns.
    for idx in 0..total {
        let (col, row) = (
            (idx / cfg.rows as usize) as u32,
            (idx % cfg.rows as usize) as u32,
        );
        let id = well_name(row, col);
        let (well_type, value) = if idx < cfg.n_pos {
            (WellType::PositiveControl, pos.sample(&mut rng))
        } else if idx < cfg.n_pos + cfg.n_neg {
            (WellType::NegativeControl, neg.sample(&mut rng))
        } else {
            let hit = samples.next().unwrap_or(false);
            truth.insert(id.clone(), hit);
            let v = if hit {
                pos.sample(&mut rng)
            } else {
                neg.sample(&mut rng)
            };
            (WellType::Sample, v)
        };
        wells.push(Well {
            well_id: id,
            row: row + 1,
            col: col + 1,
            value,
            well_type,
        });
    }
    Ok(SyntheticPlate {
        plate: PlateData::new(cfg.plate_id.clone(), wells)?,
        truth,
    })
}
