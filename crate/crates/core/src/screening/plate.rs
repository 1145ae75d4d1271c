use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sample::{Label, SampleSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WellType {
    PositiveControl,
    NegativeControl,
    Sample,
}

impl WellType {
    pub fn as_str(self) -> &'static str {
        match self {
            WellType::PositiveControl => "positive_control",
            WellType::NegativeControl => "negative_control",
            WellType::Sample => "sample",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "positive_control" => Some(WellType::PositiveControl),
            "negative_control" => Some(WellType::NegativeControl),
            "sample" => Some(WellType::Sample),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Well {
    pub well_id: String,
    pub row: u32,
    pub col: u32,
    pub value: f64,
    pub well_type: WellType,
}

/// Minimum number of wells of each control type on a usable plate.
pub const MIN_CONTROLS: usize = 2;

/// Wells of one plate, in input order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlateData {
    pub plate_id: String,
    pub wells: Vec<Well>,
}

impl PlateData {
    /// Checks control counts, finiteness and `(row, col)` uniqueness.
    pub fn new(plate_id: impl Into<String>, wells: Vec<Well>) -> Result<Self> {
        let plate = Self {
            plate_id: plate_id.into(),
            wells,
        };
        plate.validate()?;
        Ok(plate)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for w in &self.wells {
            if !w.value.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "well {} on plate {} has non-finite value",
                    w.well_id, self.plate_id
                )));
            }
            if !seen.insert((w.row, w.col)) {
                return Err(Error::DuplicateWell {
                    plate: self.plate_id.clone(),
                    row: w.row,
                    col: w.col,
                    line: 0,
                });
            }
        }
        let positive = self.count(WellType::PositiveControl);
        let negative = self.count(WellType::NegativeControl);
        if positive < MIN_CONTROLS || negative < MIN_CONTROLS {
            return Err(Error::InsufficientControls {
                plate: self.plate_id.clone(),
                positive,
                negative,
            });
        }
        Ok(())
    }

    fn count(&self, t: WellType) -> usize {
        self.wells.iter().filter(|w| w.well_type == t).count()
    }

    pub fn values_of(&self, t: WellType) -> Vec<f64> {
        self.wells
            .iter()
            .filter(|w| w.well_type == t)
            .map(|w| w.value)
            .collect()
    }

    pub fn positive_controls(&self) -> Result<SampleSet> {
        SampleSet::new(self.values_of(WellType::PositiveControl), Label::Positive)
    }

    pub fn negative_controls(&self) -> Result<SampleSet> {
        SampleSet::new(self.values_of(WellType::NegativeControl), Label::Negative)
    }

    pub fn samples(&self) -> impl Iterator<Item = &Well> {
        self.wells
            .iter()
            .filter(|w| w.well_type == WellType::Sample)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn well(id: &str, row: u32, col: u32, value: f64, t: WellType) -> Well {
        Well {
            well_id: id.into(),
            row,
            col,
            value,
            well_type: t,
        }
    }

    #[test]
    fn control_counts_enforced() {
        let wells = vec![
            well("A1", 1, 1, 0.1, WellType::PositiveControl),
            well("A2", 1, 2, 1.0, WellType::NegativeControl),
            well("A3", 1, 3, 1.1, WellType::NegativeControl),
        ];
        assert_eq!(
            PlateData::new("p", wells),
            Err(Error::InsufficientControls {
                plate: "p".into(),
                positive: 1,
                negative: 2
            })
        );
    }

    #[test]
    fn duplicate_positions_rejected() {
        let wells = vec![
            well("A1", 1, 1, 0.1, WellType::PositiveControl),
            well("A1b", 1, 1, 0.2, WellType::PositiveControl),
        ];
        assert!(matches!(
            PlateData::new("p", wells),
            Err(Error::DuplicateWell { .. })
        ));
    }

    #[test]
    fn well_type_names_round_trip() {
        for t in [
            WellType::PositiveControl,
            WellType::NegativeControl,
            WellType::Sample,
        ] {
            assert_eq!(WellType::parse(t.as_str()), Some(t));
        }
        assert_eq!(WellType::parse("control"), None);
    }
}
