use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which experimental group a sample belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Positive,
    Negative,
    #[default]
    Unknown,
}

/// A non-empty group of finite measurements.
///
/// Order carries no meaning: every statistic computed from a `SampleSet` is
/// permutation-invariant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    values: Vec<f64>,
    label: Label,
}

impl SampleSet {
    pub fn new(values: Vec<f64>, label: Label) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInput("sample set is empty".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite value {} at index {i}",
                values[i]
            )));
        }
        Ok(Self { values, label })
    }

    /// Unlabeled sample.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        Self::new(values, Label::Unknown)
    }

    pub fn positive(values: Vec<f64>) -> Result<Self> {
        Self::new(values, Label::Positive)
    }

    pub fn negative(values: Vec<f64>) -> Result<Self> {
        Self::new(values, Label::Negative)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self) -> Label {
        self.label
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Returns a copy with `f` applied to every value.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.values.iter().map(|&v| f(v)).collect(), self.label)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}
