use crate::error::Result;
use crate::grid::{minmax_normalize, RealField};
use crate::operators::{convolve, directional_derivative_along, Direction, SmoothingKernel};

/// Site-wise edge indicator in `[0, 1]`.
///
/// The field is smoothed with `kernel`; then in 1D the indicator is the
/// min-max normalized magnitude of the forward difference, and in 2D the
/// site-wise maximum over the four directions of the independently
/// normalized directional-derivative magnitudes.
pub fn jump_indicator(r: &RealField, kernel: &SmoothingKernel) -> Result<RealField> {
    let smooth = convolve(r, kernel)?;
    let directions: &[Direction] = if r.shape().ndim() == 1 {
        &[Direction::X]
    } else {
        &Direction::ALL
    };
    let mut out = vec![0.0f64; r.len()];
    for &dir in directions {
        let d = directional_derivative_along(&smooth, dir)?;
        let mags: Vec<f64> = d.values().iter().map(|v| v.abs()).collect();
        for (o, v) in out.iter_mut().zip(minmax_normalize(&mags)?) {
            *o = o.max(v);
        }
    }
    RealField::new(r.shape(), out)
}
