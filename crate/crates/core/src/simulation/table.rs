use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Coordinates of one experiment cell. Unused coordinates are `None`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CellKey {
    pub sigma: Option<f64>,
    pub shift: Option<f64>,
    pub outlier_fraction: Option<f64>,
    pub outlier_mean: Option<f64>,
    pub n: usize,
}

/// Summary of one measure over the trials of one cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    /// Trials where the measure was defined.
    pub count: usize,
    /// Trials where it was not (degenerate dispersion or location tie).
    pub undefined: usize,
    pub mean: f64,
    pub variance: f64,
    pub min: f64,
    pub max: f64,
    pub q025: f64,
    pub q50: f64,
    pub q95: f64,
    pub q975: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureRow {
    pub cell: CellKey,
    pub measure: String,
    pub stats: Aggregate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureTable {
    pub experiment: String,
    pub distribution: String,
    pub trials: usize,
    pub seed: u64,
    pub rows: Vec<MeasureRow>,
}

// Flat CSV layout, one line per (cell, measure).
#[derive(Serialize)]
struct CsvRow<'a> {
    experiment: &'a str,
    distribution: &'a str,
    sigma: Option<f64>,
    shift: Option<f64>,
    outlier_fraction: Option<f64>,
    outlier_mean: Option<f64>,
    n: usize,
    measure: &'a str,
    count: usize,
    undefined: usize,
    mean: f64,
    variance: f64,
    min: f64,
    max: f64,
    q025: f64,
    q50: f64,
    q95: f64,
    q975: f64,
}

impl MeasureTable {
    pub fn find(&self, cell: impl Fn(&CellKey) -> bool, measure: &str) -> Option<&Aggregate> {
        self.rows
            .iter()
            .find(|r| r.measure == measure && cell(&r.cell))
            .map(|r| &r.stats)
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for r in &self.rows {
            let s = &r.stats;
            out.serialize(CsvRow {
                experiment: &self.experiment,
                distribution: &self.distribution,
                sigma: r.cell.sigma,
                shift: r.cell.shift,
                outlier_fraction: r.cell.outlier_fraction,
                outlier_mean: r.cell.outlier_mean,
                n: r.cell.n,
                measure: &r.measure,
                count: s.count,
                undefined: s.undefined,
                mean: s.mean,
                variance: s.variance,
                min: s.min,
                max: s.max,
                q025: s.q025,
                q50: s.q50,
                q95: s.q95,
                q975: s.q975,
            })
            .map_err(|e| Error::Io(e.to_string()))?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }
}

/// Pairwise (cascade) summation; the result depends only on the order of `xs`.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    const LEAF: usize = 32;
    if xs.len() <= LEAF {
        xs.iter().sum()
    } else {
        let (l, r) = xs.split_at(xs.len() / 2);
        pairwise_sum(l) + pairwise_sum(r)
    }
}

// Linear interpolation between order statistics.
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Aggregates per-trial values; `None` entries count as undefined.
pub fn aggregate(values: &[Option<f64>]) -> Aggregate {
    let defined: Vec<f64> = values.iter().flatten().copied().collect();
    let undefined = values.len() - defined.len();
    if defined.is_empty() {
        return Aggregate {
            count: 0,
            undefined,
            mean: f64::NAN,
            variance: f64::NAN,
            min: f64::NAN,
            max: f64::NAN,
            q025: f64::NAN,
            q50: f64::NAN,
            q95: f64::NAN,
            q975: f64::NAN,
        };
    }
    let n = defined.len();
    let mean = pairwise_sum(&defined) / n as f64;
    let variance = if n > 1 {
        let sq: Vec<f64> = defined.iter().map(|x| (x - mean) * (x - mean)).collect();
        pairwise_sum(&sq) / (n - 1) as f64
    } else {
        0.0
    };
    let mut sorted = defined;
    sorted.sort_unstable_by(f64::total_cmp);
    Aggregate {
        count: n,
        undefined,
        mean,
        variance,
        min: sorted[0],
        max: sorted[n - 1],
        q025: quantile_sorted(&sorted, 0.025),
        q50: quantile_sorted(&sorted, 0.5),
        q95: quantile_sorted(&sorted, 0.95),
        q975: quantile_sorted(&sorted, 0.975),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aggregate_small() {
        let a = aggregate(&[Some(1.0), Some(2.0), None, Some(3.0), Some(4.0)]);
        assert_eq!(a.count, 4);
        assert_eq!(a.undefined, 1);
        assert_eq!(a.mean, 2.5);
        assert!((a.variance - 5.0 / 3.0).abs() < 1e-15);
        assert_eq!((a.min, a.max, a.q50), (1.0, 4.0, 2.5));
        assert!(a.min <= a.q025 && a.q975 <= a.max);
    }

    #[test]
    fn aggregate_all_undefined() {
        let a = aggregate(&[None, None]);
        assert_eq!(a.count, 0);
        assert!(a.mean.is_nan());
    }

    #[test]
    fn pairwise_sum_exact_on_integers() {
        let xs: Vec<f64> = (1..=1000).map(f64::from).collect();
        assert_eq!(pairwise_sum(&xs), 500_500.0);
    }

    #[test]
    fn csv_header_and_empty_cells() {
        let t = MeasureTable {
            experiment: "shift".into(),
            distribution: "normal".into(),
            trials: 1,
            seed: 0,
            rows: vec![MeasureRow {
                cell: CellKey {
                    sigma: Some(1.0),
                    shift: Some(0.5),
                    n: 10,
                    ..CellKey::default()
                },
                measure: "gssmd".into(),
                stats: aggregate(&[Some(0.1)]),
            }],
        };
        let csv = t.to_csv_string().unwrap();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "experiment,distribution,sigma,shift,outlier_fraction,outlier_mean,n,measure,count,undefined,mean,variance,min,max,q025,q50,q95,q975"
        );
        assert_eq!(
            lines.next().unwrap(),
            "shift,normal,1.0,0.5,,,10,gssmd,1,0,0.1,0.0,0.1,0.1,0.1,0.1,0.1,0.1"
        );
    }
}
