//! Periodic finite differences.
//!
//! The forward-difference gradient `F` and its adjoint are diagonalized by the
//! DFT, which the solver relies on for its closed-form fidelity step.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};
use crate::grid::{RealField, Shape};

/// Grouped gradient values: one scalar per site in 1D, a pair
/// `(D_x u, D_y u)` per site in 2D.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientField {
    shape: Shape,
    dx: Vec<f64>,
    dy: Option<Vec<f64>>,
}

impl GradientField {
    pub fn zeros(shape: Shape) -> Self {
        let n = shape.len();
        Self {
            shape,
            dx: vec![0.0; n],
            dy: (shape.ndim() == 2).then(|| vec![0.0; n]),
        }
    }

    pub fn from_components(shape: Shape, dx: Vec<f64>, dy: Option<Vec<f64>>) -> Result<Self> {
        if dx.len() != shape.len() || dy.as_ref().is_some_and(|d| d.len() != shape.len()) {
            return Err(Error::invalid("gradient component length mismatch"));
        }
        if dy.is_some() != (shape.ndim() == 2) {
            return Err(Error::invalid("gradient component count must match grid dimension"));
        }
        Ok(Self { shape, dx, dy })
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    /// Number of groups `n`.
    pub fn len(&self) -> usize {
        self.dx.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dx.is_empty()
    }

    /// Values per group: 1 or 2.
    pub fn group_dim(&self) -> usize {
        if self.dy.is_some() {
            2
        } else {
            1
        }
    }

    pub fn dx(&self) -> &[f64] {
        &self.dx
    }

    pub fn dy(&self) -> Option<&[f64]> {
        self.dy.as_deref()
    }

    pub fn group(&self, j: usize) -> [f64; 2] {
        [self.dx[j], self.dy.as_ref().map_or(0.0, |d| d[j])]
    }

    pub fn set_group(&mut self, j: usize, g: [f64; 2]) {
        self.dx[j] = g[0];
        if let Some(dy) = self.dy.as_mut() {
            dy[j] = g[1];
        }
    }

    /// Euclidean norm of group `j`.
    pub fn magnitude(&self, j: usize) -> f64 {
        let [a, b] = self.group(j);
        a.hypot(b)
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        (0..self.len()).map(|j| self.magnitude(j)).collect()
    }

    /// Flat view of all entries (dx then dy).
    pub fn iter_values(&self) -> impl Iterator<Item = &f64> {
        self.dx.iter().chain(self.dy.iter().flatten())
    }

    pub fn norm2(&self) -> f64 {
        self.iter_values().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &GradientField) -> f64 {
        self.iter_values().zip(other.iter_values()).map(|(a, b)| a * b).sum()
    }

    /// `self + s · other`, elementwise.
    pub fn axpy(&self, s: f64, other: &GradientField) -> GradientField {
        let comb = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x + s * y).collect();
        GradientField {
            shape: self.shape,
            dx: comb(&self.dx, &other.dx),
            dy: self
                .dy
                .as_ref()
                .zip(other.dy.as_ref())
                .map(|(a, b)| comb(a, b)),
        }
    }

    pub fn scaled(&self, s: f64) -> GradientField {
        GradientField {
            shape: self.shape,
            dx: self.dx.iter().map(|v| s * v).collect(),
            dy: self.dy.as_ref().map(|d| d.iter().map(|v| s * v).collect()),
        }
    }
}

/// Periodic forward differences.
pub fn grad_forward(u: &RealField) -> GradientField {
    let shape = u.shape();
    let (ny, nx) = shape.dims();
    let v = u.values();
    let mut dx = vec![0.0; v.len()];
    for y in 0..ny {
        let row = &v[y * nx..(y + 1) * nx];
        for x in 0..nx {
            dx[y * nx + x] = row[(x + 1) % nx] - row[x];
        }
    }
    let dy = (shape.ndim() == 2).then(|| {
        let mut dy = vec![0.0; v.len()];
        for y in 0..ny {
            let yn = (y + 1) % ny;
            for x in 0..nx {
                dy[y * nx + x] = v[yn * nx + x] - v[y * nx + x];
            }
        }
        dy
    });
    GradientField { shape, dx, dy }
}

/// Negative periodic divergence, the exact adjoint of [`grad_forward`].
pub fn grad_adjoint(g: &GradientField) -> RealField {
    let shape = g.shape;
    let (ny, nx) = shape.dims();
    let mut out = vec![0.0; shape.len()];
    for y in 0..ny {
        for x in 0..nx {
            let j = y * nx + x;
            let xm = y * nx + (x + nx - 1) % nx;
            out[j] = g.dx[xm] - g.dx[j];
        }
    }
    if let Some(dy) = &g.dy {
        for y in 0..ny {
            let ym = (y + ny - 1) % ny;
            for x in 0..nx {
                out[y * nx + x] += dy[ym * nx + x] - dy[y * nx + x];
            }
        }
    }
    RealField::from_vec_unchecked(shape, out)
}

/// Eigenvalues of `FᵀF` indexed like the DFT grid:
/// `Σ_axes 4 sin²(π k / n)`.
pub fn laplacian_eigenvalues(shape: Shape) -> Vec<f64> {
    let (ny, nx) = shape.dims();
    let axis = |k: usize, n: usize| {
        let s = (PI * k as f64 / n as f64).sin();
        4.0 * s * s
    };
    let mut out = Vec::with_capacity(shape.len());
    for ky in 0..ny {
        let ey = if shape.ndim() == 2 { axis(ky, ny) } else { 0.0 };
        for kx in 0..nx {
            out.push(ey + axis(kx, nx));
        }
    }
    out
}

/// The four unit directions probed by the 2D jump indicator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `(1, 0)`
    X,
    /// `(0, 1)`
    Y,
    /// `(1/√2, 1/√2)`
    Diagonal,
    /// `(−1/√2, 1/√2)`
    AntiDiagonal,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::X,
        Direction::Y,
        Direction::Diagonal,
        Direction::AntiDiagonal,
    ];

    pub fn from_vector(v: [f64; 2]) -> Result<Self> {
        const TOL: f64 = 1e-12;
        let close = |a: [f64; 2], b: [f64; 2]| (a[0] - b[0]).abs() < TOL && (a[1] - b[1]).abs() < TOL;
        Self::ALL
            .into_iter()
            .find(|d| close(d.vector(), v))
            .ok_or_else(|| Error::invalid(format!("unsupported direction {v:?}")))
    }

    pub fn vector(self) -> [f64; 2] {
        match self {
            Direction::X => [1.0, 0.0],
            Direction::Y => [0.0, 1.0],
            Direction::Diagonal => [FRAC_1_SQRT_2, FRAC_1_SQRT_2],
            Direction::AntiDiagonal => [-FRAC_1_SQRT_2, FRAC_1_SQRT_2],
        }
    }

    /// Grid offset `(dx, dy)` of one step and its length.
    fn step(self) -> (isize, isize, f64) {
        match self {
            Direction::X => (1, 0, 1.0),
            Direction::Y => (0, 1, 1.0),
            Direction::Diagonal => (1, 1, std::f64::consts::SQRT_2),
            Direction::AntiDiagonal => (-1, 1, std::f64::consts::SQRT_2),
        }
    }
}

/// Periodic forward difference along a unit direction, divided by the step
/// length so diagonals are on the same scale as axis differences.
pub fn directional_derivative(u: &RealField, v: [f64; 2]) -> Result<RealField> {
    let dir = Direction::from_vector(v)?;
    directional_derivative_along(u, dir)
}

pub fn directional_derivative_along(u: &RealField, dir: Direction) -> Result<RealField> {
    let shape = u.shape();
    let (ox, oy, len) = dir.step();
    if shape.ndim() == 1 && oy != 0 {
        return Err(Error::invalid(format!("direction {dir:?} needs a 2D field")));
    }
    let (ny, nx) = shape.dims();
    let (nyi, nxi) = (ny as isize, nx as isize);
    let v = u.values();
    let mut out = vec![0.0; v.len()];
    for y in 0..ny {
        let ys = ((y as isize + oy).rem_euclid(nyi)) as usize;
        for x in 0..nx {
            let xs = ((x as isize + ox).rem_euclid(nxi)) as usize;
            out[y * nx + x] = (v[ys * nx + xs] - v[y * nx + x]) / len;
        }
    }
    Ok(RealField::from_vec_unchecked(shape, out))
}
