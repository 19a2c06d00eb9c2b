use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::RealField;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelType {
    Triangular,
    Gaussian,
    ShiftedCosine,
}

impl KernelType {
    pub const ALL: [KernelType; 3] = [
        KernelType::Triangular,
        KernelType::Gaussian,
        KernelType::ShiftedCosine,
    ];

    /// Unnormalized radial profile on `t ∈ [0, 1]`.
    fn profile(self, t: f64) -> f64 {
        if t >= 1.0 {
            return 0.0;
        }
        match self {
            KernelType::Triangular => 1.0 - t,
            KernelType::Gaussian => (-t * t / (2.0 * 0.25)).exp(),
            KernelType::ShiftedCosine => 0.5 * (1.0 + (PI * t).cos()),
        }
    }
}

/// Compactly supported, nonnegative, radially decaying averaging kernel with
/// taps summing to one.
///
/// Offsets `i ∈ [−(l−1)/2, (l−1)/2]` are sampled at `t = |i| / ((l+1)/2)`, so
/// the outermost taps stay positive; for `l = 3` the triangular kernel is
/// `(1/4, 1/2, 1/4)`. In 2D the profile is evaluated at the Euclidean offset
/// on an `l × l` stencil.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothingKernel {
    kind: KernelType,
    support: usize,
    dim: usize,
    taps: Vec<f64>,
}

impl SmoothingKernel {
    pub fn new(kind: KernelType, support: usize, dim: usize) -> Result<Self> {
        if support < 3 || support % 2 == 0 {
            return Err(Error::invalid(format!(
                "kernel support must be odd and at least 3, got {support}"
            )));
        }
        if dim != 1 && dim != 2 {
            return Err(Error::invalid(format!("kernel dimension must be 1 or 2, got {dim}")));
        }
        let half = (support as f64 + 1.0) / 2.0;
        let c = (support / 2) as isize;
        let mut taps = Vec::with_capacity(support.pow(dim as u32));
        if dim == 1 {
            for i in -c..=c {
                taps.push(kind.profile(i.abs() as f64 / half));
            }
        } else {
            for a in -c..=c {
                for b in -c..=c {
                    let r = ((a * a + b * b) as f64).sqrt() / half;
                    taps.push(kind.profile(r));
                }
            }
        }
        let total: f64 = taps.iter().sum();
        taps.iter_mut().for_each(|t| *t /= total);
        Ok(Self {
            kind,
            support,
            dim,
            taps,
        })
    }

    pub fn kind(&self) -> KernelType {
        self.kind
    }

    pub fn support(&self) -> usize {
        self.support
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major taps: `l` values in 1D, `l × l` in 2D.
    pub fn taps(&self) -> &[f64] {
        &self.taps
    }
}

/// Periodic discrete convolution; output has the input's shape.
pub fn convolve(u: &RealField, k: &SmoothingKernel) -> Result<RealField> {
    let shape = u.shape();
    if shape.ndim() != k.dim {
        return Err(Error::invalid(format!(
            "{}D kernel applied to a {}D field",
            k.dim,
            shape.ndim()
        )));
    }
    let (ny, nx) = shape.dims();
    let (nyi, nxi) = (ny as isize, nx as isize);
    let l = k.support as isize;
    let c = l / 2;
    let v = u.values();
    let mut out = vec![0.0; v.len()];
    let rows: Vec<isize> = if k.dim == 2 { (-c..=c).collect() } else { vec![0] };
    for y in 0..ny as isize {
        for x in 0..nx as isize {
            let mut acc = 0.0;
            for (ri, &a) in rows.iter().enumerate() {
                let ys = (y - a).rem_euclid(nyi) as usize;
                let base = ri * k.support;
                for (bi, b) in (-c..=c).enumerate() {
                    let xs = (x - b).rem_euclid(nxi) as usize;
                    acc += k.taps[base + bi] * v[ys * nx + xs];
                }
            }
            out[y as usize * nx + x as usize] = acc;
        }
    }
    Ok(RealField::from_vec_unchecked(shape, out))
}
