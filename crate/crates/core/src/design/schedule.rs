use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Log-equispaced regularization parameters over a random window of the
/// exponent range `[-3, 3]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaSchedule {
    pub seed: u64,
    /// `log10` of the first and last λ.
    pub window: [f64; 2],
    pub values: Vec<f64>,
}

impl LambdaSchedule {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Geometric median of the schedule, `10^{(e_lo + e_hi)/2}`.
    pub fn geometric_center(&self) -> f64 {
        10f64.powf(0.5 * (self.window[0] + self.window[1]))
    }
}

/// Draws a window length `w ~ U[2, 4]` decades and a start
/// `e_lo ~ U[-3, 3 - w]`, then returns `C` values `10^{e_lo + k w/(C-1)}`.
pub fn lambda_schedule(seed: u64, count: usize) -> Result<LambdaSchedule> {
    if count < 2 {
        return Err(Error::invalid(format!(
            "ensemble size must be at least 2, got {count}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let width: f64 = rng.random_range(2.0..=4.0);
    let lo: f64 = rng.random_range(-3.0..=3.0 - width);
    let step = width / (count - 1) as f64;
    let values = (0..count)
        .map(|k| 10f64.powf(lo + k as f64 * step))
        .collect();
    Ok(LambdaSchedule {
        seed,
        window: [lo, lo + width],
        values,
    })
}
