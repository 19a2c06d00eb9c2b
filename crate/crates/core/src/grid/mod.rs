//! Grid-indexed fields, patch partitions and error metrics.
//!
//! Every scalar quantity in the pipeline (the unknown image, average
//! reconstructions, jump indicators, exponent and weight fields) is a
//! [`RealField`] stored row-major: site `j = y * nx + x`.

mod field;
mod metrics;
mod patch;

pub use field::{ComplexVector, RealField, Shape};
pub use metrics::{minmax_normalize, pointwise_error, relative_error, sigma_for_snr, Norm};
pub use patch::{PatchLabel, PatchPartition};
