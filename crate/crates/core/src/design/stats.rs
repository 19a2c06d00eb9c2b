use serde::Serialize;

use super::ensemble::Ensemble;
use crate::error::{Error, Result};
use crate::grid::{minmax_normalize, PatchPartition, RealField};
use crate::operators::{grad_forward, GradientField};

/// `g_p = (1/C) Σ_k D u_{λ_k; p}`.
pub fn average_gradient(ensemble: &Ensemble) -> Result<GradientField> {
    mean_gradient(&ensemble.members)
}

pub fn mean_gradient(members: &[RealField]) -> Result<GradientField> {
    let first = members
        .first()
        .ok_or_else(|| Error::invalid("empty ensemble"))?;
    let shape = first.shape();
    let mut acc = GradientField::zeros(shape);
    for m in members {
        m.check_same_shape(first)?;
        acc = acc.axpy(1.0, &grad_forward(m));
    }
    Ok(acc.scaled(1.0 / members.len() as f64))
}

/// `r_p = (1/C) Σ_k u_{λ_k; p}`.
pub fn average_reconstruction(ensemble: &Ensemble) -> Result<RealField> {
    mean_field(&ensemble.members)
}

pub fn mean_field(members: &[RealField]) -> Result<RealField> {
    let first = members
        .first()
        .ok_or_else(|| Error::invalid("empty ensemble"))?;
    let mut acc = vec![0.0; first.len()];
    for m in members {
        m.check_same_shape(first)?;
        for (a, v) in acc.iter_mut().zip(m.values()) {
            *a += v;
        }
    }
    let c = members.len() as f64;
    Ok(RealField::from_vec_unchecked(
        first.shape(),
        acc.into_iter().map(|a| a / c).collect(),
    ))
}

/// Per-patch statistics of the gradient magnitude `|g_j|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PatchStats {
    pub variance: Vec<f64>,
    pub average: Vec<f64>,
    /// Min-max normalized across patches.
    pub norm_variance: Vec<f64>,
    pub norm_average: Vec<f64>,
}

/// `var = mean(|g|²) − mean(|g|)²` and `avg = mean(|g|)` on each patch, with
/// `|g_j|` the Euclidean norm of the site's gradient pair.
pub fn patch_stats(g: &GradientField, part: &PatchPartition) -> Result<PatchStats> {
    if g.shape() != part.shape() {
        return Err(Error::invalid("gradient and partition shapes differ"));
    }
    let mut variance = Vec::with_capacity(part.len());
    let mut average = Vec::with_capacity(part.len());
    for p in 0..part.len() {
        let sites = part.sites(p);
        let k = sites.len() as f64;
        let (mut s1, mut s2) = (0.0, 0.0);
        for &j in sites {
            let m = g.magnitude(j);
            s1 += m;
            s2 += m * m;
        }
        let mean = s1 / k;
        variance.push((s2 / k - mean * mean).max(0.0));
        average.push(mean);
    }
    Ok(PatchStats {
        norm_variance: minmax_normalize(&variance)?,
        norm_average: minmax_normalize(&average)?,
        variance,
        average,
    })
}
