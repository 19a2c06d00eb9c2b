use num_complex::Complex64;
use rayon::prelude::*;

use super::schedule::LambdaSchedule;
use crate::error::{Error, Result};
use crate::grid::RealField;
use crate::operators::MeasurementOperator;
use crate::solver::{solve, SolverOptions, WeightedProblem};

/// Homogeneous reconstructions `u_{λ_k; p}` for one uniform exponent.
#[derive(Debug, Clone)]
pub struct Ensemble {
    pub exponent: f64,
    pub schedule: LambdaSchedule,
    pub members: Vec<RealField>,
    pub converged: Vec<bool>,
    pub iterations: Vec<usize>,
}

impl Ensemble {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn unconverged(&self) -> usize {
        self.converged.iter().filter(|&&c| !c).count()
    }
}

/// Solves the homogeneous problem (unit weights, exponent `p` everywhere) for
/// every λ in the schedule. Members keep schedule order; the solves run in
/// parallel.
///
/// Unconverged members are kept. More than half unconverged is an error.
pub fn sample_ensemble(
    operator: &MeasurementOperator,
    data: &[Complex64],
    p: f64,
    schedule: &LambdaSchedule,
    rho: f64,
    opts: &SolverOptions,
) -> Result<Ensemble> {
    let reports = schedule
        .values
        .par_iter()
        .map(|&lambda| {
            let problem = WeightedProblem::homogeneous(operator, data, p, lambda, rho)?;
            solve(&problem, opts)
        })
        .collect::<Result<Vec<_>>>()?;

    let converged: Vec<bool> = reports.iter().map(|r| r.converged).collect();
    let unconverged = converged.iter().filter(|&&c| !c).count();
    if 2 * unconverged > reports.len() {
        return Err(Error::Ensemble {
            unconverged,
            total: reports.len(),
        });
    }
    let iterations = reports.iter().map(|r| r.iterations).collect();
    Ok(Ensemble {
        exponent: p,
        schedule: schedule.clone(),
        members: reports.into_iter().map(|r| r.solution).collect(),
        converged,
        iterations,
    })
}
