use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::mask::FrequencyMask;
use crate::error::{Error, Result};
use crate::grid::{ComplexVector, RealField, Shape};

/// Unitary discrete Fourier transform on a 1D or 2D grid.
#[derive(Clone)]
pub struct Dft {
    shape: Shape,
    row_fwd: Arc<dyn Fft<f64>>,
    row_inv: Arc<dyn Fft<f64>>,
    col_fwd: Option<Arc<dyn Fft<f64>>>,
    col_inv: Option<Arc<dyn Fft<f64>>>,
    scale: f64,
}

impl fmt::Debug for Dft {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Dft").field("shape", &self.shape).finish()
    }
}

impl Dft {
    pub fn new(shape: Shape) -> Self {
        let mut planner = FftPlanner::new();
        let (ny, nx) = shape.dims();
        let (col_fwd, col_inv) = if shape.ndim() == 2 {
            (
                Some(planner.plan_fft_forward(ny)),
                Some(planner.plan_fft_inverse(ny)),
            )
        } else {
            (None, None)
        };
        Self {
            shape,
            row_fwd: planner.plan_fft_forward(nx),
            row_inv: planner.plan_fft_inverse(nx),
            col_fwd,
            col_inv,
            scale: 1.0 / (shape.len() as f64).sqrt(),
        }
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn forward(&self, buf: &mut [Complex64]) {
        self.apply(buf, &self.row_fwd, self.col_fwd.as_ref());
    }

    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.apply(buf, &self.row_inv, self.col_inv.as_ref());
    }

    /// Forward transform of a real field.
    pub fn forward_real(&self, u: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = u.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward(&mut buf);
        buf
    }

    fn apply(&self, buf: &mut [Complex64], row: &Arc<dyn Fft<f64>>, col: Option<&Arc<dyn Fft<f64>>>) {
        assert_eq!(buf.len(), self.shape.len());
        row.process(buf);
        if let Some(col) = col {
            let (ny, nx) = self.shape.dims();
            let mut t = transpose(buf, ny, nx);
            col.process(&mut t);
            let back = transpose(&t, nx, ny);
            buf.copy_from_slice(&back);
        }
        for v in buf.iter_mut() {
            *v *= self.scale;
        }
    }
}

fn transpose(a: &[Complex64], rows: usize, cols: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len()];
    for r in 0..rows {
        for c in 0..cols {
            out[c * rows + r] = a[r * cols + c];
        }
    }
    out
}

/// Subsampled unitary Fourier measurement `G = P·𝓕` mapping a real field to
/// the kept coefficients, flattened row-major over kept frequency indices.
#[derive(Debug, Clone)]
pub struct MeasurementOperator {
    mask: FrequencyMask,
    kept: Vec<usize>,
    dft: Dft,
}

impl MeasurementOperator {
    pub fn new(mask: FrequencyMask) -> Self {
        let kept = mask.indices();
        let dft = Dft::new(mask.shape());
        Self { mask, kept, dft }
    }

    pub fn mask(&self) -> &FrequencyMask {
        &self.mask
    }

    pub fn shape(&self) -> Shape {
        self.mask.shape()
    }

    /// Number of measurements `m`.
    pub fn count(&self) -> usize {
        self.kept.len()
    }

    pub fn dft(&self) -> &Dft {
        &self.dft
    }

    pub fn forward(&self, u: &RealField) -> Result<ComplexVector> {
        if u.shape() != self.shape() {
            return Err(Error::invalid(format!(
                "field shape {} does not match operator shape {}",
                u.shape(),
                self.shape()
            )));
        }
        let spectrum = self.dft.forward_real(u.values());
        Ok(self.kept.iter().map(|&k| spectrum[k]).collect())
    }

    /// Real part of the inverse transform of the zero-filled spectrum; the
    /// adjoint of [`forward`](Self::forward) for the real inner product
    /// `⟨a, b⟩ = Re Σ conj(a_k) b_k`.
    pub fn adjoint(&self, d: &[Complex64]) -> Result<RealField> {
        if d.len() != self.count() {
            return Err(Error::invalid(format!(
                "expected {} measurements, got {}",
                self.count(),
                d.len()
            )));
        }
        let mut buf = vec![Complex64::new(0.0, 0.0); self.shape().len()];
        for (&k, &v) in self.kept.iter().zip(d) {
            buf[k] = v;
        }
        self.dft.inverse(&mut buf);
        RealField::new(self.shape(), buf.iter().map(|c| c.re).collect())
    }

    /// Eigenvalues of `GᵀG` restricted to real fields: `(M_k + M_{−k}) / 2`.
    pub fn normal_multiplier(&self) -> Vec<f64> {
        let flags = self.mask.flags();
        (0..flags.len())
            .map(|k| {
                let a = flags[k] as u8 as f64;
                let b = flags[self.mask.negated(k)] as u8 as f64;
                0.5 * (a + b)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::mask::Axis;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn random_field(rng: &mut ChaCha8Rng, ny: usize, nx: usize) -> RealField {
        RealField::from_fn_2d(ny, nx, |_, _| rng.random_range(-1.0..1.0))
    }

    /// Quadratic-time unitary DFT.
    fn naive_dft(u: &RealField) -> Vec<Complex64> {
        let (ny, nx) = u.shape().dims();
        let n = (ny * nx) as f64;
        let mut out = vec![Complex64::new(0.0, 0.0); ny * nx];
        for ky in 0..ny {
            for kx in 0..nx {
                let mut acc = Complex64::new(0.0, 0.0);
                for y in 0..ny {
                    for x in 0..nx {
                        let phase = -2.0 * PI
                            * ((ky * y) as f64 / ny as f64 + (kx * x) as f64 / nx as f64);
                        acc += u.at(y, x) * Complex64::from_polar(1.0, phase);
                    }
                }
                out[ky * nx + kx] = acc / n.sqrt();
            }
        }
        out
    }

    #[test]
    fn constant_and_impulse() {
        let shape = Shape::D2 { ny: 8, nx: 8 };
        let op = MeasurementOperator::new(FrequencyMask::full(shape).unwrap());
        let c = op.forward(&RealField::constant(shape, 2.5)).unwrap();
        assert!((c[0].re - 2.5 * 8.0).abs() < 1e-12);
        assert!(c[1..].iter().all(|v| v.norm() < 1e-12));

        let mut delta = vec![0.0; 64];
        delta[0] = 1.0;
        let d = op.forward(&RealField::new(shape, delta).unwrap()).unwrap();
        assert!(d.iter().all(|v| (v - Complex64::new(0.125, 0.0)).norm() < 1e-14));
    }

    #[test]
    fn matches_naive_dft_on_random_mask() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let shape = Shape::D2 { ny: 6, nx: 10 };
        let flags: Vec<bool> = (0..60).map(|k| k == 0 || rng.random_bool(0.4)).collect();
        let op = MeasurementOperator::new(FrequencyMask::from_flags(shape, flags.clone()).unwrap());
        let u = random_field(&mut rng, 6, 10);
        let got = op.forward(&u).unwrap();
        let full = naive_dft(&u);
        let want: Vec<Complex64> = (0..60).filter(|&k| flags[k]).map(|k| full[k]).collect();
        assert_eq!(got.len(), want.len());
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn adjoint_identity_and_unitarity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let shape = Shape::D2 { ny: 16, nx: 12 };
        let op = MeasurementOperator::new(
            FrequencyMask::lowfreq_axis(shape, Axis::Y, 0.4).unwrap(),
        );
        let u = random_field(&mut rng, 16, 12);
        let v: Vec<Complex64> = (0..op.count())
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let gu = op.forward(&u).unwrap();
        let lhs: f64 = gu.iter().zip(&v).map(|(a, b)| (a.conj() * b).re).sum();
        let rhs = u.dot(&op.adjoint(&v).unwrap());
        assert!((lhs - rhs).abs() < 1e-10);

        let full = MeasurementOperator::new(FrequencyMask::full(shape).unwrap());
        let back = full.adjoint(&full.forward(&u).unwrap()).unwrap();
        for (a, b) in back.values().iter().zip(u.values()) {
            assert!((a - b).abs() < 1e-12);
        }
        let zero = op.adjoint(&vec![Complex64::new(0.0, 0.0); op.count()]).unwrap();
        assert!(zero.values().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn shape_and_length_errors() {
        let op = MeasurementOperator::new(FrequencyMask::full(Shape::D1(8)).unwrap());
        assert!(op.forward(&RealField::zeros(Shape::D1(9))).is_err());
        assert!(op.adjoint(&[Complex64::new(1.0, 0.0)]).is_err());
    }

    #[test]
    fn one_dimensional_transform() {
        let op = MeasurementOperator::new(FrequencyMask::full(Shape::D1(5)).unwrap());
        let u = RealField::from_fn_1d(5, |i| (i * i) as f64);
        let got = op.forward(&u).unwrap();
        let want = naive_dft(&u);
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
