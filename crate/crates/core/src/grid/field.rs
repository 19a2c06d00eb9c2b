use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Measurement vectors (data `d`, noise) are plain complex vectors.
pub type ComplexVector = Vec<Complex64>;

/// Dimensions of a uniform grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Shape {
    D1(usize),
    D2 { ny: usize, nx: usize },
}

impl Shape {
    pub fn len(&self) -> usize {
        match *self {
            Shape::D1(n) => n,
            Shape::D2 { ny, nx } => ny * nx,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of spatial dimensions (1 or 2).
    pub fn ndim(&self) -> usize {
        match self {
            Shape::D1(_) => 1,
            Shape::D2 { .. } => 2,
        }
    }

    /// `(ny, nx)`, with a 1D grid viewed as a single row.
    pub fn dims(&self) -> (usize, usize) {
        match *self {
            Shape::D1(n) => (1, n),
            Shape::D2 { ny, nx } => (ny, nx),
        }
    }

    /// Dimensions as a list, `[n]` or `[ny, nx]`.
    pub fn to_vec(&self) -> Vec<usize> {
        match *self {
            Shape::D1(n) => vec![n],
            Shape::D2 { ny, nx } => vec![ny, nx],
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::D1(n) => write!(f, "({n})"),
            Shape::D2 { ny, nx } => write!(f, "({ny}, {nx})"),
        }
    }
}

/// A real scalar field on a uniform 1D or 2D grid.
///
/// Values are always finite; constructors reject NaN and infinities.
#[derive(Debug, Clone, PartialEq)]
pub struct RealField {
    shape: Shape,
    values: Vec<f64>,
}

impl RealField {
    pub fn new(shape: Shape, values: Vec<f64>) -> Result<Self> {
        if values.len() != shape.len() {
            return Err(Error::invalid(format!(
                "shape {shape} needs {} values, got {}",
                shape.len(),
                values.len()
            )));
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("non-finite value at site {j}")));
        }
        Ok(Self { shape, values })
    }

    pub fn zeros(shape: Shape) -> Self {
        Self {
            shape,
            values: vec![0.0; shape.len()],
        }
    }

    pub fn constant(shape: Shape, value: f64) -> Self {
        Self {
            shape,
            values: vec![value; shape.len()],
        }
    }

    pub fn from_fn_2d(ny: usize, nx: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut values = Vec::with_capacity(ny * nx);
        for y in 0..ny {
            for x in 0..nx {
                values.push(f(y, x));
            }
        }
        Self::from_vec_unchecked(Shape::D2 { ny, nx }, values)
    }

    pub fn from_fn_1d(n: usize, f: impl FnMut(usize) -> f64) -> Self {
        Self::from_vec_unchecked(Shape::D1(n), (0..n).map(f).collect())
    }

    /// Internal constructor for values produced by finite arithmetic.
    pub(crate) fn from_vec_unchecked(shape: Shape, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), shape.len());
        debug_assert!(values.iter().all(|v| v.is_finite()));
        Self { shape, values }
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Value at row `y`, column `x` (a 1D field has the single row `y = 0`).
    pub fn at(&self, y: usize, x: usize) -> f64 {
        let (_, nx) = self.shape.dims();
        self.values[y * nx + x]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> RealField {
        Self::from_vec_unchecked(self.shape, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn scaled(&self, s: f64) -> RealField {
        self.map(|v| s * v)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn norm2(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &RealField) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub(crate) fn check_same_shape(&self, other: &RealField) -> Result<()> {
        if self.shape != other.shape {
            return Err(Error::invalid(format!(
                "shape mismatch: {} vs {}",
                self.shape, other.shape
            )));
        }
        Ok(())
    }
}
