use serde::{Deserialize, Serialize};

use super::Shape;
use crate::error::{Error, Result};

/// Feature class assigned to a patch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PatchLabel {
    Discontinuity,
    Oscillation,
    Smoothness,
}

/// Non-overlapping square (2D) or interval (1D) patches covering a grid.
///
/// Patches are numbered row-major over the patch grid. When the side does not
/// divide a grid dimension the last patch along that axis is shorter.
#[derive(Debug, Clone, PartialEq)]
pub struct PatchPartition {
    shape: Shape,
    side: usize,
    patch_rows: usize,
    patch_cols: usize,
    sites: Vec<Vec<usize>>,
    neighbors: Vec<Vec<usize>>,
    owner: Vec<usize>,
}

impl PatchPartition {
    pub fn new(shape: Shape, side: usize) -> Result<Self> {
        if side == 0 {
            return Err(Error::invalid("patch side must be positive"));
        }
        if shape.is_empty() {
            return Err(Error::invalid("cannot partition an empty grid"));
        }
        let (ny, nx) = shape.dims();
        let side_y = if shape.ndim() == 1 { 1 } else { side };
        let patch_rows = ny.div_ceil(side_y);
        let patch_cols = nx.div_ceil(side);
        let count = patch_rows * patch_cols;

        let mut sites = vec![Vec::new(); count];
        let mut owner = vec![0; shape.len()];
        for y in 0..ny {
            for x in 0..nx {
                let p = (y / side_y) * patch_cols + x / side;
                sites[p].push(y * nx + x);
                owner[y * nx + x] = p;
            }
        }

        let mut neighbors = vec![Vec::new(); count];
        for pr in 0..patch_rows {
            for pc in 0..patch_cols {
                let p = pr * patch_cols + pc;
                let list = &mut neighbors[p];
                if pr > 0 {
                    list.push(p - patch_cols);
                }
                if pc > 0 {
                    list.push(p - 1);
                }
                if pc + 1 < patch_cols {
                    list.push(p + 1);
                }
                if pr + 1 < patch_rows {
                    list.push(p + patch_cols);
                }
            }
        }

        Ok(Self {
            shape,
            side,
            patch_rows,
            patch_cols,
            sites,
            neighbors,
            owner,
        })
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    /// `(rows, cols)` of the patch grid.
    pub fn grid_dims(&self) -> (usize, usize) {
        (self.patch_rows, self.patch_cols)
    }

    /// Site indices belonging to patch `p`, in row-major order.
    pub fn sites(&self, p: usize) -> &[usize] {
        &self.sites[p]
    }

    pub fn neighbors(&self, p: usize) -> &[usize] {
        &self.neighbors[p]
    }

    /// Patch containing site `j`.
    pub fn patch_of(&self, j: usize) -> usize {
        self.owner[j]
    }

    /// Broadcast one value per patch to every site of the grid.
    pub fn broadcast(&self, per_patch: &[f64]) -> Vec<f64> {
        self.owner.iter().map(|&p| per_patch[p]).collect()
    }
}
