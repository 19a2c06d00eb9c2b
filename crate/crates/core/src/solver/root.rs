use crate::error::{Error, Result};

const MAX_ITER: usize = 200;

/// Chandrupatla's bracketing root finder.
///
/// Each step either bisects or takes an inverse quadratic interpolation step,
/// choosing the latter only when the three most recent points make the
/// interpolant monotone on the bracket. The sign change is kept every
/// iteration, so the result is as safe as bisection and usually converges
/// superlinearly.
///
/// Returns the bracket endpoint with the smaller `|f|` once the bracket is
/// narrower than `tol` (plus a relative machine-precision term) or an exact
/// zero is hit.
pub fn chandrupatla_root<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::Bracket {
            lo,
            hi,
            f_lo: fa,
            f_hi: fb,
        });
    }

    let (mut c, mut fc);
    let mut t = 0.5;
    for _ in 0..MAX_ITER {
        let xt = a + t * (b - a);
        let ft = f(xt);
        if ft.signum() == fa.signum() {
            c = a;
            fc = fa;
        } else {
            c = b;
            b = a;
            fc = fb;
            fb = fa;
        }
        a = xt;
        fa = ft;

        let (xm, fm) = if fa.abs() < fb.abs() { (a, fa) } else { (b, fb) };
        if fm == 0.0 {
            return Ok(xm);
        }
        let width = (b - c).abs();
        let tol_here = 2.0 * f64::EPSILON * xm.abs() + 0.5 * tol;
        let tl = tol_here / width;
        if tl > 0.5 || !tl.is_finite() {
            return Ok(xm);
        }

        let xi = (a - b) / (c - b);
        let phi = (fa - fb) / (fc - fb);
        t = if phi * phi < xi && (1.0 - phi) * (1.0 - phi) < 1.0 - xi {
            fa / (fb - fa) * fc / (fb - fc) + (c - a) / (b - a) * fa / (fc - fa) * fb / (fc - fb)
        } else {
            0.5
        };
        t = t.clamp(tl, 1.0 - tl);
    }
    Ok(if fa.abs() < fb.abs() { a } else { b })
}
