//! Overlap-based standardized effect sizes.
//!
//! GSSMD measures the difference between two groups as
//! `sign(mean_pos - mean_neg) * (1 - OVL)`, where OVL is the overlap
//! coefficient of the two group densities. The crate also provides the
//! classical measures it is compared with (SSMD, Z'-factor and their robust
//! variants), risk-based threshold selection, a seeded Monte Carlo harness and a
//! plate-screening hit-selection pipeline.

pub mod error;
pub mod overlap;
pub mod report;
pub mod risk;
pub mod sample;
pub mod screening;
pub mod simulation;
pub mod stats;

pub use error::{Error, Result};
pub use overlap::{gssmd, BinRule, OverlapEstimate, OverlapMethod};
pub use report::{effect_size_report, EffectSizeReport};
pub use sample::{Label, SampleSet};
