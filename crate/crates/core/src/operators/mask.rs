use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::grid::Shape;

/// Grid axis. For 1D grids both variants name the single axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
}

/// How a mask was built, kept for provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "lowercase")]
pub enum MaskRule {
    /// Lowest-|frequency| band along one axis, every index along the other.
    LowFreq { axis: Axis, fraction: f64 },
    /// Every `stride`-th frequency index along one axis.
    Stride { axis: Axis, stride: usize },
    Full,
    Explicit,
}

/// Signed frequency of DFT index `k` on an axis of length `n`.
///
/// The Nyquist index of an even-length axis is reported as `-n/2`.
pub fn signed_frequency(k: usize, n: usize) -> i64 {
    if 2 * k < n {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// Indices of the `count` lowest-|frequency| bins, DC first, negative before
/// positive on ties.
pub fn lowest_frequency_indices(n: usize, count: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by_key(|&k| {
        let f = signed_frequency(k, n);
        (f.abs(), f)
    });
    idx.truncate(count);
    idx.sort_unstable();
    idx
}

/// Keep-flags over the DFT grid of a field.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyMask {
    shape: Shape,
    keep: Vec<bool>,
    rule: MaskRule,
}

impl FrequencyMask {
    /// Keeps the `⌊fraction · len⌋` lowest-frequency indices along `axis`.
    pub fn lowfreq_axis(shape: Shape, axis: Axis, fraction: f64) -> Result<Self> {
        if !(fraction > 0.0 && fraction <= 1.0) {
            return Err(Error::invalid(format!(
                "frequency fraction {fraction} outside (0, 1]"
            )));
        }
        let (ny, nx) = shape.dims();
        let along_y = axis == Axis::Y && shape.ndim() == 2;
        let len = if along_y { ny } else { nx };
        let count = (fraction * len as f64 + 1e-9).floor() as usize;
        if count == 0 {
            return Err(Error::invalid(format!(
                "fraction {fraction} keeps no frequencies on an axis of length {len}"
            )));
        }
        let mut band = vec![false; len];
        for k in lowest_frequency_indices(len, count) {
            band[k] = true;
        }
        let keep = (0..ny * nx)
            .map(|j| if along_y { band[j / nx] } else { band[j % nx] })
            .collect();
        Ok(Self {
            shape,
            keep,
            rule: MaskRule::LowFreq { axis, fraction },
        })
    }

    /// Keeps indices `≡ 0 (mod stride)` along `axis`.
    pub fn stride_axis(shape: Shape, axis: Axis, stride: usize) -> Result<Self> {
        if stride < 1 {
            return Err(Error::invalid("stride must be at least 1"));
        }
        let (_, nx) = shape.dims();
        let along_y = axis == Axis::Y && shape.ndim() == 2;
        let keep = (0..shape.len())
            .map(|j| {
                let k = if along_y { j / nx } else { j % nx };
                k % stride == 0
            })
            .collect();
        Ok(Self {
            shape,
            keep,
            rule: MaskRule::Stride { axis, stride },
        })
    }

    pub fn full(shape: Shape) -> Result<Self> {
        if shape.is_empty() {
            return Err(Error::invalid("empty grid"));
        }
        Ok(Self {
            shape,
            keep: vec![true; shape.len()],
            rule: MaskRule::Full,
        })
    }

    pub fn from_flags(shape: Shape, keep: Vec<bool>) -> Result<Self> {
        if keep.len() != shape.len() {
            return Err(Error::invalid("mask length does not match grid"));
        }
        if !keep.iter().any(|&k| k) {
            return Err(Error::invalid("mask keeps no frequencies"));
        }
        Ok(Self {
            shape,
            keep,
            rule: MaskRule::Explicit,
        })
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn rule(&self) -> &MaskRule {
        &self.rule
    }

    pub fn flags(&self) -> &[bool] {
        &self.keep
    }

    pub fn is_kept(&self, k: usize) -> bool {
        self.keep[k]
    }

    /// Number of measurements `m`.
    pub fn count(&self) -> usize {
        self.keep.iter().filter(|&&k| k).count()
    }

    /// Kept flat frequency indices in row-major order.
    pub fn indices(&self) -> Vec<usize> {
        (0..self.keep.len()).filter(|&k| self.keep[k]).collect()
    }

    /// Flat index of the frequency `-k` on the periodic grid.
    pub fn negated(&self, k: usize) -> usize {
        let (ny, nx) = self.shape.dims();
        let (ky, kx) = (k / nx, k % nx);
        ((ny - ky) % ny) * nx + (nx - kx) % nx
    }

    pub fn to_json(&self) -> serde_json::Value {
        let (rule, params) = match &self.rule {
            MaskRule::LowFreq { axis, fraction } => {
                ("lowfreq", json!({ "axis": axis, "fraction": fraction }))
            }
            MaskRule::Stride { axis, stride } => {
                ("stride", json!({ "axis": axis, "stride": stride }))
            }
            MaskRule::Full => ("full", json!({})),
            MaskRule::Explicit => ("explicit", json!({})),
        };
        json!({
            "shape": self.shape.to_vec(),
            "axis_rule": rule,
            "params": params,
            "count": self.count(),
            "indices": self.indices(),
        })
    }

    /// Rebuilds a mask from [`FrequencyMask::to_json`] output using the
    /// explicit index list, which is authoritative.
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let shape: Vec<usize> = serde_json::from_value(value["shape"].clone())
            .map_err(|e| Error::invalid(format!("mask shape: {e}")))?;
        let shape = match shape.as_slice() {
            [n] => Shape::D1(*n),
            [ny, nx] => Shape::D2 { ny: *ny, nx: *nx },
            _ => return Err(Error::invalid("mask shape must have 1 or 2 entries")),
        };
        let indices: Vec<usize> = serde_json::from_value(value["indices"].clone())
            .map_err(|e| Error::invalid(format!("mask indices: {e}")))?;
        let mut keep = vec![false; shape.len()];
        for k in indices {
            *keep
                .get_mut(k)
                .ok_or_else(|| Error::invalid(format!("mask index {k} out of range")))? = true;
        }
        let mut mask = Self::from_flags(shape, keep)?;
        let params = &value["params"];
        mask.rule = match value["axis_rule"].as_str() {
            Some("lowfreq") => MaskRule::LowFreq {
                axis: serde_json::from_value(params["axis"].clone()).unwrap_or(Axis::Y),
                fraction: params["fraction"].as_f64().unwrap_or(f64::NAN),
            },
            Some("stride") => MaskRule::Stride {
                axis: serde_json::from_value(params["axis"].clone()).unwrap_or(Axis::X),
                stride: params["stride"].as_u64().unwrap_or(0) as usize,
            },
            Some("full") => MaskRule::Full,
            _ => MaskRule::Explicit,
        };
        Ok(mask)
    }
}
