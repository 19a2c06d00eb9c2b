//! Synthetic test images, axis scaling, measurement noise and PGM import.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{ComplexVector, RealField, Shape};
use crate::io::decode_pgm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PhantomId {
    A,
    B,
    C,
    D,
    E,
    F,
    #[serde(rename = "file")]
    File,
}

impl std::str::FromStr for PhantomId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "A" | "a" => PhantomId::A,
            "B" | "b" => PhantomId::B,
            "C" | "c" => PhantomId::C,
            "D" | "d" => PhantomId::D,
            "E" | "e" => PhantomId::E,
            "F" | "f" => PhantomId::F,
            "file" => PhantomId::File,
            _ => return Err(Error::invalid(format!("unknown phantom id {s:?}"))),
        })
    }
}

/// Geometry and feature parameters shared by the synthetic phantoms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhantomParams {
    /// Region radius (rose, disk) or half leg (triangle) as a fraction of `n/2`.
    pub radius_fraction: f64,
    /// Oscillation amplitude.
    pub amplitude: f64,
    /// Oscillation periods across the feature region.
    pub frequency: f64,
    /// Base level of the oscillating regions.
    pub offset: f64,
    /// Compression factor `k` of D–F along x (content width `n/k`).
    pub scale: usize,
}

impl Default for PhantomParams {
    fn default() -> Self {
        Self {
            radius_fraction: 0.8,
            amplitude: 0.5,
            frequency: 8.0,
            offset: 0.5,
            scale: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhantomSpec {
    pub id: PhantomId,
    /// Grid side; phantoms are square.
    pub size: usize,
    #[serde(default)]
    pub params: PhantomParams,
    /// Source image for `id = "file"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
}

impl PhantomSpec {
    pub fn new(id: PhantomId, size: usize) -> Self {
        Self {
            id,
            size,
            params: PhantomParams::default(),
            path: None,
        }
    }
}

/// Generates the phantom described by `spec`.
///
/// * A: indicator of the four-petal rose `r ≤ R|cos 2θ|`.
/// * B: `c₀ + A sin(2πfρ/R)` inside the disk of radius `R`; outside a
///   Gaussian decay from `c₀ + 2A` so the boundary jump is at least `A`.
/// * C: lower-left right triangle holding a vertical ramp from `c₀ + 0.1`
///   to `c₀ + 1.1` plus `A sin(2πf x/n)`; 0 outside.
/// * D–F: A–C compressed along x by `params.scale`.
/// * file: PGM block-averaged to `size × size`.
pub fn make_phantom(spec: &PhantomSpec) -> Result<RealField> {
    let n = spec.size;
    if spec.id == PhantomId::File {
        let path = spec
            .path
            .as_ref()
            .ok_or_else(|| Error::invalid("phantom id \"file\" needs a path"))?;
        return load_grayscale(path, n);
    }
    if n < 32 {
        return Err(Error::invalid(format!("phantom size {n} is below 32")));
    }
    let p = &spec.params;
    if !(p.radius_fraction > 0.0 && p.radius_fraction <= 1.0) {
        return Err(Error::invalid("phantom radius_fraction must lie in (0, 1]"));
    }
    if !(p.amplitude.is_finite() && p.frequency.is_finite() && p.offset.is_finite()) {
        return Err(Error::invalid("phantom parameters must be finite"));
    }
    let scaled = |id| -> Result<RealField> {
        let base = make_phantom(&PhantomSpec {
            id,
            ..spec.clone()
        })?;
        scale_x(&base, p.scale)
    };
    match spec.id {
        PhantomId::A => Ok(rose(n, p)),
        PhantomId::B => Ok(disk(n, p)),
        PhantomId::C => Ok(triangle(n, p)),
        PhantomId::D => scaled(PhantomId::A),
        PhantomId::E => scaled(PhantomId::B),
        PhantomId::F => scaled(PhantomId::C),
        PhantomId::File => unreachable!(),
    }
}

/// Site `(y, x)` relative to the grid center.
fn centered(n: usize, y: usize, x: usize) -> (f64, f64) {
    let c = 0.5 * (n as f64 - 1.0);
    (y as f64 - c, x as f64 - c)
}

fn rose(n: usize, p: &PhantomParams) -> RealField {
    let r_max = p.radius_fraction * n as f64 / 2.0;
    RealField::from_fn_2d(n, n, |y, x| {
        let (dy, dx) = centered(n, y, x);
        let theta = dy.atan2(dx);
        let r = dx.hypot(dy);
        if r <= r_max * (2.0 * theta).cos().abs() {
            1.0
        } else {
            0.0
        }
    })
}

fn disk(n: usize, p: &PhantomParams) -> RealField {
    let r_max = p.radius_fraction * n as f64 / 2.0;
    let peak = p.offset + 2.0 * p.amplitude.abs();
    let width = 0.3 * n as f64;
    RealField::from_fn_2d(n, n, |y, x| {
        let (dy, dx) = centered(n, y, x);
        let rho = dx.hypot(dy);
        if rho < r_max {
            p.offset + p.amplitude * (2.0 * PI * p.frequency * rho / r_max).sin()
        } else {
            peak * (-((rho - r_max) / width).powi(2)).exp()
        }
    })
}

/// Corners of the triangle's bounding square `[lo, hi)` in both axes.
fn triangle_box(n: usize, p: &PhantomParams) -> (usize, usize) {
    let half = p.radius_fraction * n as f64 / 2.0;
    let lo = (n as f64 / 2.0 - half).round().max(0.0) as usize;
    let hi = ((n as f64 / 2.0 + half).round() as usize).min(n);
    (lo, hi)
}

fn triangle_ramp(n: usize, p: &PhantomParams, y: usize) -> f64 {
    let (lo, hi) = triangle_box(n, p);
    p.offset + 0.1 + (y - lo) as f64 / (hi - lo) as f64
}

fn triangle(n: usize, p: &PhantomParams) -> RealField {
    let (lo, hi) = triangle_box(n, p);
    RealField::from_fn_2d(n, n, |y, x| {
        let inside = (lo..hi).contains(&y) && x >= lo && x - lo <= y - lo;
        if inside {
            triangle_ramp(n, p, y) + p.amplitude * (2.0 * PI * p.frequency * x as f64 / n as f64).sin()
        } else {
            0.0
        }
    })
}

/// Compresses the content into the central `nx/k` columns by nearest-site
/// sampling; the remaining columns are 0.
pub fn scale_x(u: &RealField, k: usize) -> Result<RealField> {
    let (ny, nx) = u.shape().dims();
    if k == 0 || nx % k != 0 {
        return Err(Error::invalid(format!(
            "scale factor 1/{k} does not divide the width {nx}"
        )));
    }
    let band = nx / k;
    let off = (nx - band) / 2;
    let values = (0..ny)
        .flat_map(|y| {
            (0..nx).map(move |x| {
                if (off..off + band).contains(&x) {
                    u.at(y, (x - off) * k + k / 2)
                } else {
                    0.0
                }
            })
        })
        .collect();
    RealField::new(u.shape(), values)
}

/// Adds i.i.d. `N(0, σ²)` to the real and imaginary part of every entry.
pub fn add_noise(d: &[Complex64], sigma: f64, seed: u64) -> Result<ComplexVector> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::invalid(format!("noise sigma {sigma} must be >= 0")));
    }
    if sigma == 0.0 {
        return Ok(d.to_vec());
    }
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::invalid(e.to_string()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(d
        .iter()
        .map(|c| {
            let re = normal.sample(&mut rng);
            let im = normal.sample(&mut rng);
            c + Complex64::new(re, im)
        })
        .collect())
}

/// Reads an 8-bit PGM and block-averages it to `target × target`.
///
/// The image sides must be integer multiples of `target`.
pub fn load_grayscale(path: impl AsRef<Path>, target: usize) -> Result<RealField> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let img = decode_pgm(&bytes).map_err(|e| Error::io(path, e))?;
    let (ny, nx) = img.shape().dims();
    if target == 0 || ny % target != 0 || nx % target != 0 {
        return Err(Error::io(
            path,
            format!("{nx}x{ny} image cannot be block-averaged to {target}x{target}"),
        ));
    }
    let (by, bx) = (ny / target, nx / target);
    let area = (by * bx) as f64;
    Ok(RealField::from_fn_2d(target, target, |y, x| {
        let mut s = 0.0;
        for yy in y * by..(y + 1) * by {
            for xx in x * bx..(x + 1) * bx {
                s += img.at(yy, xx);
            }
        }
        s / area
    }))
}

/// 1D signal with a jump directly adjacent to a period-3 oscillation.
///
/// 0 on `[0, n/4)`, `1 + amplitude·sin(2πj/3)` on `[n/4, 3n/4)`, then a
/// smooth `cos²` decay back to 0 so the periodic wrap carries no jump.
pub fn step_oscillation_1d(n: usize, amplitude: f64) -> Result<RealField> {
    if n < 32 || n % 4 != 0 {
        return Err(Error::invalid(format!(
            "step/oscillation length {n} must be a multiple of 4 and >= 32"
        )));
    }
    let (a, b) = (n / 4, 3 * n / 4);
    RealField::new(
        Shape::D1(n),
        (0..n)
            .map(|j| {
                if j < a {
                    0.0
                } else if j < b {
                    1.0 + amplitude * (2.0 * PI * j as f64 / 3.0).sin()
                } else {
                    let t = (j - b) as f64 / (n - b) as f64;
                    (0.5 * PI * t).cos().powi(2)
                }
            })
            .collect(),
    )
}

/// Sites where the 1D step and the oscillation interior sit in
/// [`step_oscillation_1d`]: `(step site, interior range)`.
pub fn step_oscillation_regions(n: usize) -> (usize, std::ops::Range<usize>) {
    (n / 4, n / 4 + 4..3 * n / 4 - 4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::pgm_raw;

    fn make(id: PhantomId) -> RealField {
        make_phantom(&PhantomSpec::new(id, 64)).unwrap()
    }

    fn value_set(u: &RealField) -> Vec<f64> {
        let mut v: Vec<f64> = u.values().to_vec();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }

    #[test]
    fn rose_is_two_valued() {
        assert_eq!(value_set(&make(PhantomId::A)), vec![0.0, 1.0]);
        assert_eq!(value_set(&make(PhantomId::D)), vec![0.0, 1.0]);
    }

    #[test]
    fn rose_gradient_support_is_thin() {
        let a = make(PhantomId::A);
        let g = crate::operators::grad_forward(&a);
        let edge = (0..g.len()).filter(|&j| g.magnitude(j) > 0.0).count();
        // four petals, each bounded by two arcs of length about 1.2 R
        let r = 0.8 * 32.0;
        let perimeter = 4.0 * 2.0 * 1.25 * r;
        assert!(edge as f64 <= 8.0 * perimeter);
        assert!(edge > 0);
    }

    #[test]
    fn disk_boundary_jump_along_every_radius() {
        let n = 64;
        let p = PhantomParams::default();
        let b = make(PhantomId::B);
        let r_max = p.radius_fraction * n as f64 / 2.0;
        let c = 0.5 * (n as f64 - 1.0);
        for step in 0..360 {
            let th = step as f64 * PI / 180.0;
            // last inside and first outside site along the ray
            let mut inside = None;
            let mut outside = None;
            let mut t = 0.0;
            while t < n as f64 / 2.0 {
                let (y, x) = ((c + t * th.sin()).round(), (c + t * th.cos()).round());
                let rho = (y - c).hypot(x - c);
                let v = b.at(y as usize, x as usize);
                if rho < r_max {
                    inside = Some(v);
                } else if outside.is_none() {
                    outside = Some(v);
                }
                t += 0.25;
            }
            let jump = (outside.unwrap() - inside.unwrap()).abs();
            assert!(jump >= p.amplitude / 2.0, "angle {step}: jump {jump}");
        }
    }

    #[test]
    fn triangle_rows_are_ramp_plus_sine() {
        let n = 64;
        let p = PhantomParams::default();
        let c = make(PhantomId::C);
        let (lo, hi) = triangle_box(n, &p);
        let y = (lo + hi) / 2;
        for x in lo..=y {
            let expect = p.offset + 0.1 + (y - lo) as f64 / (hi - lo) as f64
                + p.amplitude * (2.0 * PI * p.frequency * x as f64 / n as f64).sin();
            assert!((c.at(y, x) - expect).abs() < 1e-12);
        }
        assert_eq!(c.at(y, y + 2), 0.0);
        assert_eq!(c.at(0, 0), 0.0);
    }

    #[test]
    fn phantoms_are_deterministic_and_validated() {
        for id in [PhantomId::A, PhantomId::B, PhantomId::C, PhantomId::D, PhantomId::E, PhantomId::F] {
            let a = make(id);
            let b = make(id);
            assert_eq!(a.values(), b.values());
            assert_eq!(a.shape(), Shape::D2 { ny: 64, nx: 64 });
        }
        assert!(make_phantom(&PhantomSpec::new(PhantomId::A, 16)).is_err());
        assert!("Q".parse::<PhantomId>().is_err());
        let spec: PhantomSpec = serde_json::from_str(r#"{"id":"B","size":32}"#).unwrap();
        assert_eq!(spec.params, PhantomParams::default());
    }

    #[test]
    fn scale_examples() {
        let a = make(PhantomId::A);
        assert_eq!(scale_x(&a, 1).unwrap(), a);
        let d = scale_x(&a, 4).unwrap();
        for y in 0..64 {
            for x in 0..64 {
                if d.at(y, x) != 0.0 {
                    assert!((24..40).contains(&x));
                }
            }
        }
        assert!(scale_x(&a, 3).is_err());
    }

    #[test]
    fn noise_examples() {
        let d: Vec<Complex64> = (0..50_000).map(|k| Complex64::new(k as f64, -1.0)).collect();
        assert_eq!(add_noise(&d, 0.0, 1).unwrap(), d);
        let a = add_noise(&d, 0.3, 7).unwrap();
        assert_eq!(a, add_noise(&d, 0.3, 7).unwrap());
        assert_ne!(a, add_noise(&d, 0.3, 8).unwrap());
        let diffs: Vec<f64> = a
            .iter()
            .zip(&d)
            .flat_map(|(x, y)| {
                let e = x - y;
                [e.re, e.im]
            })
            .collect();
        let mean = diffs.iter().sum::<f64>() / diffs.len() as f64;
        let var = diffs.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / diffs.len() as f64;
        assert!((var.sqrt() - 0.3).abs() < 0.02 * 0.3);
        assert!(add_noise(&d, -1.0, 0).is_err());
    }

    #[test]
    fn grayscale_import() {
        let dir = tempfile::tempdir().unwrap();
        let constant = dir.path().join("c.pgm");
        let mut bytes = b"P2\n# constant\n4 4\n255\n".to_vec();
        bytes.extend("50 ".repeat(16).bytes());
        std::fs::write(&constant, bytes).unwrap();
        let u = load_grayscale(&constant, 2).unwrap();
        assert!(u.values().iter().all(|&v| v == 50.0));

        let checker = RealField::from_fn_2d(256, 256, |y, x| if (y / 2 + x / 2) % 2 == 0 { 200.0 } else { 10.0 });
        let path = dir.path().join("k.pgm");
        std::fs::write(&path, pgm_raw(&checker).unwrap()).unwrap();
        let down = load_grayscale(&path, 128).unwrap();
        for y in 0..128 {
            for x in 0..128 {
                assert_eq!(down.at(y, x), checker.at(2 * y, 2 * x));
            }
        }
        assert_eq!(load_grayscale(&path, 256).unwrap(), checker);
        assert!(matches!(load_grayscale(&path, 100), Err(Error::Io { .. })));
        assert!(matches!(load_grayscale(dir.path().join("missing.pgm"), 8), Err(Error::Io { .. })));
    }

    #[test]
    fn step_oscillation_layout() {
        let u = step_oscillation_1d(128, 0.2).unwrap();
        assert_eq!(u.values()[31], 0.0);
        assert!(u.values()[32] > 0.7);
        assert!((u.values()[127] - (0.5 * PI * 31.0 / 32.0).cos().powi(2)).abs() < 1e-15);
        assert!(step_oscillation_1d(102, 0.2).is_err());
    }
}
