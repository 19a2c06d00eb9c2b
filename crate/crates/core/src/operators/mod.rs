//! Linear operators: subsampled Fourier measurements, periodic differences,
//! and smoothing kernels.

mod fourier;
mod gradient;
mod kernel;
mod mask;

pub use fourier::{Dft, MeasurementOperator};
pub use gradient::{
    directional_derivative, directional_derivative_along, grad_adjoint, grad_forward,
    laplacian_eigenvalues, Direction, GradientField,
};
pub use kernel::{convolve, KernelType, SmoothingKernel};
pub use mask::{lowest_frequency_indices, signed_frequency, Axis, FrequencyMask, MaskRule};
