//! Plate-based hit selection.
//!
//! Controls on each plate define the effect-size measures, a risk-minimizing
//! GSSMD threshold, SSMD cutoffs and a Neyman–Pearson cutoff; every sample well
//! is then called against each. Positive controls may sit below the negatives
//! (viability screens); all logic follows the direction of the control means.

mod hits;
mod io;
mod logistic;
mod plate;
mod synth;

pub use hits::{
    call_hits, count_hits, gssmd_threshold, overlap_bounds, plate_measures, plate_thresholds,
    screen_plate, ssmd_cutoff, ssmd_thresholds, well_ssmd, write_calls_csv, HitCounts, HitReport,
    HitThresholds, OverlapBounds, ScreenConfig, SsmdCriteria, WellCall, CALLS_HEADER, SSMD_STRONG,
    SSMD_WEAK_DEFAULT,
};
pub use io::{parse_plates, write_plates, PlateBatch, RejectedPlate, PLATE_HEADER};
pub use logistic::{
    fit_logistic_1d, fit_logistic_reference, LogisticFit, LogisticReference, GRADIENT_TOLERANCE,
    MAX_ITERATIONS, RIDGE,
};
pub use plate::{PlateData, Well, WellType, MIN_CONTROLS};
pub use synth::{synthetic_plate, SyntheticPlate, SyntheticPlateConfig};
