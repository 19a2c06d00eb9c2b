//! Exponent and weight design from homogeneous sample reconstructions.

mod classify;
mod ensemble;
mod jump;
mod pipeline;
mod schedule;
mod stats;
mod weights;

pub use classify::{classify_patches, proposed_exponents, reclassify, standard_exponents};
pub use ensemble::{sample_ensemble, Ensemble};
pub use jump::jump_indicator;
pub use pipeline::{design_fields, labels_json, DesignFields, DesignParams, VarianceSource};
pub use schedule::{lambda_schedule, LambdaSchedule};
pub use stats::{
    average_gradient, average_reconstruction, mean_field, mean_gradient, patch_stats, PatchStats,
};
pub use weights::{proposed_weights, vbjs_weights};
