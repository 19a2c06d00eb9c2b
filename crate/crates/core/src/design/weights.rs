use crate::error::{Error, Result};
use crate::grid::RealField;
use crate::operators::grad_forward;

/// `ω_j = a·J_j + b`, requiring `a < 0 < a + b` so weights stay in
/// `[a + b, b]`.
pub fn proposed_weights(jump: &RealField, a: f64, b: f64) -> Result<RealField> {
    if !(a < 0.0 && b > 0.0 && a + b > 0.0) {
        return Err(Error::invalid(format!(
            "weight map h(z) = {a}z + {b} must be decreasing and positive on [0, 1]"
        )));
    }
    if let Some(v) = jump.values().iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(Error::invalid(format!("jump indicator value {v} outside [0, 1]")));
    }
    Ok(jump.map(|z| a * z + b))
}

/// Variance-based joint sparsity weights `1 / (var_k |(D u_k)_j| + ε̂)`,
/// using the first-order difference magnitude as the sparsifying transform
/// and the population variance over the members.
pub fn vbjs_weights(members: &[RealField], eps_hat: f64) -> Result<RealField> {
    if !(eps_hat > 0.0) {
        return Err(Error::invalid(format!("ε̂ = {eps_hat} must be positive")));
    }
    let first = members
        .first()
        .ok_or_else(|| Error::invalid("empty ensemble"))?;
    let n = first.len();
    let c = members.len() as f64;
    let sparse: Vec<Vec<f64>> = members
        .iter()
        .map(|m| {
            m.check_same_shape(first)?;
            Ok(grad_forward(m).magnitudes())
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let mean = sparse.iter().map(|s| s[j]).sum::<f64>() / c;
        let var = sparse.iter().map(|s| (s[j] - mean).powi(2)).sum::<f64>() / c;
        out.push(1.0 / (var + eps_hat));
    }
    RealField::new(first.shape(), out)
}
