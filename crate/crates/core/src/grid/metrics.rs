use serde::{Deserialize, Serialize};

use super::{ComplexVector, RealField};
use crate::error::{Error, Result};

/// Vector norms used by the relative error metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Norm {
    L1,
    L2,
    LInf,
}

impl Norm {
    pub const ALL: [Norm; 3] = [Norm::L1, Norm::L2, Norm::LInf];

    pub fn apply<'a>(self, values: impl Iterator<Item = &'a f64>) -> f64 {
        match self {
            Norm::L1 => values.map(|v| v.abs()).sum(),
            Norm::L2 => values.map(|v| v * v).sum::<f64>().sqrt(),
            Norm::LInf => values.fold(0.0, |m, v| m.max(v.abs())),
        }
    }
}

/// Affine rescaling onto `[0, 1]`. A constant input maps to all zeros.
pub fn minmax_normalize(x: &[f64]) -> Result<Vec<f64>> {
    if x.is_empty() {
        return Err(Error::invalid("cannot normalize an empty vector"));
    }
    let lo = x.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !lo.is_finite() || !hi.is_finite() {
        return Err(Error::invalid("cannot normalize non-finite values"));
    }
    let range = hi - lo;
    if range == 0.0 {
        return Ok(vec![0.0; x.len()]);
    }
    Ok(x.iter().map(|v| ((v - lo) / range).clamp(0.0, 1.0)).collect())
}

/// `‖û − u*‖ / ‖u*‖` in the requested norm.
pub fn relative_error(u_hat: &RealField, u_star: &RealField, norm: Norm) -> Result<f64> {
    u_hat.check_same_shape(u_star)?;
    let denom = norm.apply(u_star.values().iter());
    if denom == 0.0 {
        return Err(Error::DivisionByZero(format!(
            "reference field has zero {norm:?} norm"
        )));
    }
    let diff: Vec<f64> = u_hat
        .values()
        .iter()
        .zip(u_star.values())
        .map(|(a, b)| a - b)
        .collect();
    Ok(norm.apply(diff.iter()) / denom)
}

/// Site-wise `|û_j − u*_j|`.
pub fn pointwise_error(u_hat: &RealField, u_star: &RealField) -> Result<RealField> {
    u_hat.check_same_shape(u_star)?;
    let values = u_hat
        .values()
        .iter()
        .zip(u_star.values())
        .map(|(a, b)| (a - b).abs())
        .collect();
    Ok(RealField::from_vec_unchecked(u_hat.shape(), values))
}

/// Per-component noise standard deviation giving the requested SNR.
///
/// SNR in decibels is `10 log10(P / σ²)` with `P = ‖clean‖² / m` the mean
/// squared measurement magnitude and `σ` the standard deviation of each of
/// the real and imaginary noise components.
pub fn sigma_for_snr(clean: &ComplexVector, snr_db: f64) -> Result<f64> {
    if clean.is_empty() {
        return Err(Error::invalid("empty measurement vector"));
    }
    if !snr_db.is_finite() {
        return Err(Error::invalid("SNR must be finite"));
    }
    let power = clean.iter().map(|c| c.norm_sqr()).sum::<f64>() / clean.len() as f64;
    if power == 0.0 || !power.is_finite() {
        return Err(Error::invalid("measurement has zero power"));
    }
    Ok((power / 10f64.powf(snr_db / 10.0)).sqrt())
}
