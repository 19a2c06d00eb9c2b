use super::stats::PatchStats;
use crate::error::{Error, Result};
use crate::grid::{PatchLabel, PatchPartition, RealField};

/// Labels patches from normalized gradient variances.
///
/// A patch at or below `threshold` is smooth. Above it, the patch is an
/// oscillation when at least half of its neighbors are also above the
/// threshold, and a discontinuity otherwise.
pub fn classify_patches(
    stats: &PatchStats,
    part: &PatchPartition,
    threshold: f64,
) -> Result<Vec<PatchLabel>> {
    if stats.norm_variance.len() != part.len() {
        return Err(Error::invalid("statistics do not match the partition"));
    }
    let high = |p: usize| stats.norm_variance[p] > threshold;
    Ok((0..part.len())
        .map(|p| {
            if !high(p) {
                return PatchLabel::Smoothness;
            }
            let neighbors = part.neighbors(p);
            let busy = neighbors.iter().filter(|&&q| high(q)).count();
            if 2 * busy >= neighbors.len() {
                PatchLabel::Oscillation
            } else {
                PatchLabel::Discontinuity
            }
        })
        .collect())
}

/// Patch-constant exponents: 1 on discontinuities, `2 − exp(−c·avg₁)` on
/// smooth patches and `2 − exp(−c·avg₂)` on oscillations, with `avg_p` the
/// normalized patch average of the `p` ensemble's gradient.
pub fn standard_exponents(
    labels: &[PatchLabel],
    stats_p1: &PatchStats,
    stats_p2: &PatchStats,
    c: f64,
    part: &PatchPartition,
) -> Result<RealField> {
    if !(c > 0.0) {
        return Err(Error::invalid(format!("exponent constant c = {c} must be positive")));
    }
    if labels.len() != part.len()
        || stats_p1.norm_average.len() != part.len()
        || stats_p2.norm_average.len() != part.len()
    {
        return Err(Error::invalid("labels/statistics do not match the partition"));
    }
    let per_patch: Vec<f64> = labels
        .iter()
        .enumerate()
        .map(|(p, label)| match label {
            PatchLabel::Discontinuity => 1.0,
            PatchLabel::Smoothness => 2.0 - (-c * stats_p1.norm_average[p]).exp(),
            PatchLabel::Oscillation => 2.0 - (-c * stats_p2.norm_average[p]).exp(),
        })
        .collect();
    RealField::new(part.shape(), part.broadcast(&per_patch))
}

/// Relabels as discontinuity every patch holding a site with `J > τ`.
pub fn reclassify(
    labels: &[PatchLabel],
    jump: &RealField,
    tau: f64,
    part: &PatchPartition,
) -> Result<Vec<PatchLabel>> {
    if jump.shape() != part.shape() || labels.len() != part.len() {
        return Err(Error::invalid("jump indicator/labels do not match the partition"));
    }
    let mut out = labels.to_vec();
    for (j, &v) in jump.values().iter().enumerate() {
        if v > tau {
            out[part.patch_of(j)] = PatchLabel::Discontinuity;
        }
    }
    Ok(out)
}

/// [`standard_exponents`] evaluated on the corrected labels.
pub fn proposed_exponents(
    corrected: &[PatchLabel],
    stats_p1: &PatchStats,
    stats_p2: &PatchStats,
    c: f64,
    part: &PatchPartition,
) -> Result<RealField> {
    standard_exponents(corrected, stats_p1, stats_p2, c, part)
}
