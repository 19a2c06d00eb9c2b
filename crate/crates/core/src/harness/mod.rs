//! Experiment configuration, orchestration and artifact output.

mod config;
mod experiment;
mod table;

pub use config::{
    EnsembleConfig, ExperimentConfig, ExponentKind, Method, NoiseConfig, SolverConfig, WeightKind,
};
pub use experiment::{
    design_provenance_json, relative_errors, run_design, run_experiment, run_method, synthesize, write_design,
    DesignStage, ErrorTriple, ExperimentOutput, Measurements, MethodResult,
};
pub use table::{compare_table, TABLE_HEADER};
