use serde::{Deserialize, Serialize};
use serde_json::json;

use super::classify::{classify_patches, proposed_exponents, reclassify, standard_exponents};
use super::ensemble::Ensemble;
use super::jump::jump_indicator;
use super::stats::{average_gradient, average_reconstruction, patch_stats, PatchStats};
use super::weights::{proposed_weights, vbjs_weights};
use crate::error::{Error, Result};
use crate::grid::{PatchLabel, PatchPartition, RealField, Shape};
use crate::operators::{KernelType, SmoothingKernel};

/// Which ensemble's average gradient feeds the classification variance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarianceSource {
    #[default]
    P1,
    P2,
}

/// Knobs of the exponent and weight design.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DesignParams {
    /// Kernel support `l` (odd).
    pub support: usize,
    /// Reclassification threshold `τ` on the jump indicator.
    pub tau: f64,
    /// Slope `a < 0` of the weight map.
    pub a: f64,
    /// Intercept `b > 0` of the weight map.
    pub b: f64,
    /// Exponent constant `c`.
    pub c: f64,
    /// Patch side in sites; `None` picks one eighth of the larger 2D grid
    /// side, or 16 in 1D.
    pub patch_side: Option<usize>,
    /// Normalized-variance threshold separating smooth patches.
    pub var_threshold: f64,
    pub kernel: KernelType,
    pub variance_source: VarianceSource,
    /// `ε̂` of the VBJS weights.
    pub eps_hat: f64,
}

impl Default for DesignParams {
    fn default() -> Self {
        Self {
            support: 3,
            tau: 0.35,
            a: -1.0,
            b: 2.0,
            c: 3.0,
            patch_side: None,
            var_threshold: 0.15,
            kernel: KernelType::Triangular,
            variance_source: VarianceSource::P1,
            eps_hat: 0.01,
        }
    }
}

impl DesignParams {
    pub fn patch_side_for(&self, shape: Shape) -> usize {
        self.patch_side.unwrap_or(match shape {
            Shape::D1(_) => 16,
            Shape::D2 { ny, nx } => (ny.max(nx) / 8).max(1),
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.support < 3 || self.support % 2 == 0 {
            return Err(Error::invalid("design.support must be odd and >= 3"));
        }
        if !(self.tau > 0.0 && self.tau < 1.0) {
            return Err(Error::invalid("design.tau must lie in (0, 1)"));
        }
        if !(self.a < 0.0 && self.b > 0.0 && self.a + self.b > 0.0) {
            return Err(Error::invalid("design.a/b must satisfy a < 0 < a + b"));
        }
        if !(self.c > 0.0) {
            return Err(Error::invalid("design.c must be positive"));
        }
        if self.patch_side == Some(0) {
            return Err(Error::invalid("design.patch_side must be positive"));
        }
        if !(0.0..1.0).contains(&self.var_threshold) {
            return Err(Error::invalid("design.var_threshold must lie in [0, 1)"));
        }
        if !(self.eps_hat > 0.0) {
            return Err(Error::invalid("design.eps_hat must be positive"));
        }
        Ok(())
    }
}

/// Output of the exponent and weight design.
#[derive(Debug, Clone)]
pub struct DesignFields {
    pub partition: PatchPartition,
    pub stats_p1: PatchStats,
    pub stats_p2: PatchStats,
    /// Labels from patch statistics alone.
    pub standard_labels: Vec<PatchLabel>,
    /// Labels after jump-based reclassification.
    pub labels: Vec<PatchLabel>,
    pub standard_exponents: RealField,
    /// Exponents from the corrected labels.
    pub exponents: RealField,
    pub jump: RealField,
    pub weights: RealField,
    /// VBJS weights from the `p = 1` and `p = 2` ensembles.
    pub vbjs_p1: RealField,
    pub vbjs_p2: RealField,
}

impl DesignFields {
    /// `[{patch_index, label}, ...]` for the corrected labels.
    pub fn labels_json(&self) -> serde_json::Value {
        labels_json(&self.labels)
    }
}

pub fn labels_json(labels: &[PatchLabel]) -> serde_json::Value {
    serde_json::Value::Array(
        labels
            .iter()
            .enumerate()
            .map(|(i, l)| json!({ "patch_index": i, "label": l }))
            .collect(),
    )
}

/// Runs the design from the two homogeneous ensembles.
pub fn design_fields(
    ensemble_p1: &Ensemble,
    ensemble_p2: &Ensemble,
    params: &DesignParams,
) -> Result<DesignFields> {
    params.validate()?;
    let first = ensemble_p1
        .members
        .first()
        .ok_or_else(|| Error::invalid("empty p = 1 ensemble"))?;
    let shape = first.shape();
    let part = PatchPartition::new(shape, params.patch_side_for(shape))?;

    let stats_p1 = patch_stats(&average_gradient(ensemble_p1)?, &part)?;
    let stats_p2 = patch_stats(&average_gradient(ensemble_p2)?, &part)?;
    let variance_stats = match params.variance_source {
        VarianceSource::P1 => &stats_p1,
        VarianceSource::P2 => &stats_p2,
    };
    let standard_labels = classify_patches(variance_stats, &part, params.var_threshold)?;
    let standard = standard_exponents(&standard_labels, &stats_p1, &stats_p2, params.c, &part)?;

    let kernel = SmoothingKernel::new(params.kernel, params.support, shape.ndim())?;
    let jump = jump_indicator(&average_reconstruction(ensemble_p1)?, &kernel)?;
    let labels = reclassify(&standard_labels, &jump, params.tau, &part)?;
    let exponents = proposed_exponents(&labels, &stats_p1, &stats_p2, params.c, &part)?;
    let weights = proposed_weights(&jump, params.a, params.b)?;

    Ok(DesignFields {
        vbjs_p1: vbjs_weights(&ensemble_p1.members, params.eps_hat)?,
        vbjs_p2: vbjs_weights(&ensemble_p2.members, params.eps_hat)?,
        partition: part,
        stats_p1,
        stats_p2,
        standard_labels,
        labels,
        standard_exponents: standard,
        exponents,
        jump,
        weights,
    })
}
