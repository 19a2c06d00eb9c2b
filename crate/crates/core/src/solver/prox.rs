//! Proximal maps of `ω‖·‖₂^p` for exponents `p ∈ [1, 2]`.

use super::root::chandrupatla_root;

/// Absolute tolerance on the root of the optimality condition.
pub const ROOT_TOL: f64 = 1e-12;

/// `argmin_x |x|^p + (κ/2)(x − q)²`.
///
/// `p = 1` is soft thresholding at `1/κ`; `p = 2` has the closed form
/// `κq/(2+κ)`; otherwise the unique zero of the increasing function
/// `T(x) = sgn(x) p |x|^{p−1} + κ(x − q)` is bracketed on `[0, |q|]`.
pub fn prox_scalar(q: f64, p: f64, kappa: f64) -> f64 {
    debug_assert!((1.0..=2.0).contains(&p), "exponent {p} outside [1, 2]");
    debug_assert!(kappa > 0.0);
    if q == 0.0 {
        return 0.0;
    }
    let mag = q.abs();
    let x = if p == 1.0 {
        (mag - 1.0 / kappa).max(0.0)
    } else if p == 2.0 {
        kappa * mag / (2.0 + kappa)
    } else {
        let t = |x: f64| p * x.powf(p - 1.0) + kappa * (x - mag);
        // T(0) = −κ|q| < 0 and T(|q|) = p|q|^{p−1} > 0. Since T(x) ≥ p x^{p−1} − κ|q|
        // the root also lies below (κ|q|/p)^{1/(p−1)}, which is far smaller than
        // |q| when p is near 1.
        let hi = (kappa * mag / p).powf(1.0 / (p - 1.0)).min(mag);
        if hi < f64::MIN_POSITIVE {
            // the root is not representable as a normal float
            0.0
        } else if t(hi) >= 0.0 {
            chandrupatla_root(t, 0.0, hi, ROOT_TOL).unwrap_or(0.0)
        } else {
            chandrupatla_root(t, 0.0, mag, ROOT_TOL).unwrap_or(0.0)
        }
    };
    x.copysign(q)
}

/// `T(x) = sgn(x) p |x|^{p−1} + κ(x − q)`, the derivative of the scalar prox
/// objective (up to the factor convention). Zero at the prox for `p > 1`.
pub fn prox_residual(x: f64, q: f64, p: f64, kappa: f64) -> f64 {
    let s = if x == 0.0 { 0.0 } else { x.signum() };
    s * p * x.abs().powf(p - 1.0) + kappa * (x - q)
}

/// Prox of `ω‖·‖₂^p` with penalty `κ/2 ‖· − x‖²` applied to one group.
///
/// The result is `prox_scalar(‖x‖, p, κ/ω) · x/‖x‖`, and zero at the origin.
pub fn prox_group(x: [f64; 2], p: f64, omega: f64, kappa: f64) -> [f64; 2] {
    let norm = x[0].hypot(x[1]);
    if norm == 0.0 {
        return [0.0, 0.0];
    }
    let shrunk = prox_scalar(norm, p, kappa / omega);
    let s = shrunk / norm;
    [s * x[0], s * x[1]]
}
