//! Convex solver for weighted inhomogeneous ℓp gradient regularization.

mod admm;
mod prox;
mod root;

pub use admm::{solve, FidelityProx, Init, SolveReport, SolverOptions, WeightedProblem};
pub use prox::{prox_group, prox_residual, prox_scalar, ROOT_TOL};
pub use root::chandrupatla_root;
