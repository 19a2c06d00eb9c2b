use std::borrow::Cow;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::prox::prox_group;
use crate::error::{Error, Result};
use crate::grid::RealField;
use crate::operators::{
    grad_adjoint, grad_forward, laplacian_eigenvalues, Dft, GradientField, MeasurementOperator,
};

/// `min_u ‖Gu − d‖² + λ Σ_j ω_j ‖(Fu)_j‖₂^{p_j}` with ADMM penalty `ρ`.
#[derive(Debug, Clone)]
pub struct WeightedProblem<'a> {
    operator: &'a MeasurementOperator,
    data: &'a [Complex64],
    exponents: Cow<'a, [f64]>,
    weights: Cow<'a, [f64]>,
    lambda: f64,
    rho: f64,
}

impl<'a> WeightedProblem<'a> {
    pub fn new(
        operator: &'a MeasurementOperator,
        data: &'a [Complex64],
        exponents: impl Into<Cow<'a, [f64]>>,
        weights: impl Into<Cow<'a, [f64]>>,
        lambda: f64,
        rho: f64,
    ) -> Result<Self> {
        let exponents = exponents.into();
        let weights = weights.into();
        let n = operator.shape().len();
        if data.len() != operator.count() {
            return Err(Error::InvalidProblem(format!(
                "{} measurements for an operator with {} rows",
                data.len(),
                operator.count()
            )));
        }
        if exponents.len() != n || weights.len() != n {
            return Err(Error::InvalidProblem(format!(
                "exponent/weight fields need {n} entries, got {}/{}",
                exponents.len(),
                weights.len()
            )));
        }
        if let Some(j) = exponents.iter().position(|p| !(1.0..=2.0).contains(p)) {
            return Err(Error::InvalidProblem(format!(
                "exponent {} at site {j} outside [1, 2]",
                exponents[j]
            )));
        }
        if let Some(j) = weights.iter().position(|w| !(*w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidProblem(format!(
                "weight {} at site {j} is not positive",
                weights[j]
            )));
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidProblem(format!("λ = {lambda} must be positive")));
        }
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::InvalidProblem(format!("ρ = {rho} must be positive")));
        }
        if !data.iter().all(|c| c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::InvalidProblem("non-finite measurement".into()));
        }
        Ok(Self {
            operator,
            data,
            exponents,
            weights,
            lambda,
            rho,
        })
    }

    /// Uniform exponent `p` and unit weights.
    pub fn homogeneous(
        operator: &'a MeasurementOperator,
        data: &'a [Complex64],
        p: f64,
        lambda: f64,
        rho: f64,
    ) -> Result<Self> {
        let n = operator.shape().len();
        Self::new(operator, data, vec![p; n], vec![1.0; n], lambda, rho)
    }

    pub fn operator(&self) -> &MeasurementOperator {
        self.operator
    }

    pub fn data(&self) -> &[Complex64] {
        self.data
    }

    pub fn exponents(&self) -> &[f64] {
        &self.exponents
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// `‖Gu − d‖²`, summing squared real and imaginary residuals.
    pub fn fidelity(&self, u: &RealField) -> Result<f64> {
        let gu = self.operator.forward(u)?;
        Ok(gu.iter().zip(self.data).map(|(a, b)| (a - b).norm_sqr()).sum())
    }

    /// `Σ_j ω_j ‖(Fu)_j‖^{p_j}`.
    pub fn regularizer(&self, u: &RealField) -> f64 {
        let g = grad_forward(u);
        (0..g.len())
            .map(|j| self.weights[j] * g.magnitude(j).powf(self.exponents[j]))
            .sum()
    }

    pub fn objective(&self, u: &RealField) -> Result<f64> {
        Ok(self.fidelity(u)? + self.lambda * self.regularizer(u))
    }
}

/// Closed-form minimizer of `‖Gu − d‖² + (ρ/2)‖Fu − x‖²`.
///
/// With periodic differences and a Fourier measurement both `GᵀG` and `FᵀF`
/// are diagonal in frequency, so the normal equations
/// `(GᵀG + (ρ/2)FᵀF) u = Gᵀd + (ρ/2)Fᵀx` are solved by one division per
/// frequency.
#[derive(Debug, Clone)]
pub struct FidelityProx {
    dft: Dft,
    denom: Vec<f64>,
    adjoint_data: RealField,
    half_rho: f64,
}

impl FidelityProx {
    pub fn new(operator: &MeasurementOperator, data: &[Complex64], rho: f64) -> Result<Self> {
        let half_rho = 0.5 * rho;
        let eig = laplacian_eigenvalues(operator.shape());
        let denom: Vec<f64> = operator
            .normal_multiplier()
            .iter()
            .zip(&eig)
            .map(|(m, s)| m + half_rho * s)
            .collect();
        if denom.iter().any(|&d| d <= 0.0) {
            return Err(Error::InvalidProblem(
                "mask must keep the zero frequency (the normal operator is singular)".into(),
            ));
        }
        Ok(Self {
            dft: operator.dft().clone(),
            denom,
            adjoint_data: operator.adjoint(data)?,
            half_rho,
        })
    }

    pub fn solve(&self, x: &GradientField) -> RealField {
        let ftx = grad_adjoint(x);
        let mut buf: Vec<Complex64> = self
            .adjoint_data
            .values()
            .iter()
            .zip(ftx.values())
            .map(|(a, b)| Complex64::new(a + self.half_rho * b, 0.0))
            .collect();
        self.dft.forward(&mut buf);
        for (v, d) in buf.iter_mut().zip(&self.denom) {
            *v /= *d;
        }
        self.dft.inverse(&mut buf);
        RealField::from_vec_unchecked(self.adjoint_data.shape(), buf.iter().map(|c| c.re).collect())
    }
}

/// Starting point of the iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Init {
    /// `u⁰ = Gᵀd`
    #[default]
    Adjoint,
    /// `u⁰ = 0`
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_iter: usize,
    pub init: Init,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-6,
            rel_tol: 1e-4,
            max_iter: 2000,
            init: Init::Adjoint,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    #[serde(skip)]
    pub solution: RealField,
    pub iterations: usize,
    pub converged: bool,
    pub objective: f64,
    /// `‖Fu^k − v^k‖₂` per iteration.
    pub primal_residuals: Vec<f64>,
    /// `ρ‖Fᵀ(v^k − v^{k−1})‖₂` per iteration.
    pub dual_residuals: Vec<f64>,
}

/// ADMM on the split `Fu = v`:
///
/// ```text
/// u ← argmin ‖Gu − d‖² + (ρ/2)‖Fu − (v − η)‖²
/// v ← prox of (λ/ρ)·Σ ω_j‖v_j‖^{p_j} at Fu + η, group by group
/// η ← η + Fu − v
/// ```
///
/// Stops when the primal and dual residuals fall below
/// `√l·abs_tol + rel_tol·max(‖Fu‖, ‖v‖)` and `√n·abs_tol + rel_tol·ρ‖Fᵀη‖`.
/// Hitting `max_iter` is reported through `converged = false`.
pub fn solve(problem: &WeightedProblem<'_>, opts: &SolverOptions) -> Result<SolveReport> {
    let op = problem.operator;
    let shape = op.shape();
    let n = shape.len();
    let rho = problem.rho;
    let kappa = rho / problem.lambda;
    let fid = FidelityProx::new(op, problem.data, rho)?;

    let mut u = match opts.init {
        Init::Adjoint => fid.adjoint_data.clone(),
        Init::Zero => RealField::zeros(shape),
    };
    let mut v = grad_forward(&u);
    let mut eta = GradientField::zeros(shape);
    let group_count = (n * v.group_dim()) as f64;

    let mut primal = Vec::new();
    let mut dual = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    while iterations < opts.max_iter {
        iterations += 1;
        u = fid.solve(&v.axpy(-1.0, &eta));
        let fu = grad_forward(&u);
        let target = fu.axpy(1.0, &eta);

        let mut v_next = GradientField::zeros(shape);
        for j in 0..n {
            let g = prox_group(
                target.group(j),
                problem.exponents[j],
                problem.weights[j],
                kappa,
            );
            v_next.set_group(j, g);
        }

        let r = fu.axpy(-1.0, &v_next);
        eta = eta.axpy(1.0, &r);
        let r_norm = r.norm2();
        let s_norm = rho * grad_adjoint(&v_next.axpy(-1.0, &v)).norm2();
        v = v_next;
        primal.push(r_norm);
        dual.push(s_norm);

        let eps_pri = group_count.sqrt() * opts.abs_tol + opts.rel_tol * fu.norm2().max(v.norm2());
        let eps_dual =
            (n as f64).sqrt() * opts.abs_tol + opts.rel_tol * rho * grad_adjoint(&eta).norm2();
        if r_norm <= eps_pri && s_norm <= eps_dual {
            converged = true;
            break;
        }
    }

    let objective = problem.objective(&u)?;
    Ok(SolveReport {
        solution: u,
        iterations,
        converged,
        objective,
        primal_residuals: primal,
        dual_residuals: dual,
    })
}
