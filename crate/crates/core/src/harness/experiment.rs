use std::borrow::Cow;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{ExperimentConfig, ExponentKind, Method, WeightKind};
use super::table::compare_table;
use crate::design::{
    design_fields, labels_json, lambda_schedule, sample_ensemble, DesignFields, DesignParams,
    Ensemble, LambdaSchedule,
};
use crate::error::{Error, Result};
use crate::grid::{pointwise_error, relative_error, sigma_for_snr, ComplexVector, Norm, RealField};
use crate::io::{write_csv, write_pgm};
use crate::operators::{FrequencyMask, MeasurementOperator};
use crate::phantoms::{add_noise, make_phantom};
use crate::solver::{solve, SolveReport, WeightedProblem};

/// Relative ℓ1, ℓ2 and ℓ∞ errors, in that order.
pub type ErrorTriple = [f64; 3];

pub fn relative_errors(u: &RealField, truth: &RealField) -> Result<ErrorTriple> {
    Ok([
        relative_error(u, truth, Norm::L1)?,
        relative_error(u, truth, Norm::L2)?,
        relative_error(u, truth, Norm::LInf)?,
    ])
}

#[derive(Debug, Clone)]
pub struct MethodResult {
    pub method: Method,
    /// λ of the final solve.
    pub lambda: f64,
    pub errors: ErrorTriple,
    pub pointwise: RealField,
    pub report: SolveReport,
}

impl MethodResult {
    pub fn reconstruction(&self) -> &RealField {
        &self.report.solution
    }
}

/// Measurement synthesis shared by all methods of a run.
#[derive(Debug, Clone)]
pub struct Measurements {
    pub truth: RealField,
    pub operator: MeasurementOperator,
    pub data: ComplexVector,
    /// Per-component noise standard deviation actually used.
    pub sigma: f64,
}

pub fn synthesize(cfg: &ExperimentConfig) -> Result<Measurements> {
    let truth = make_phantom(&cfg.phantom)?;
    let operator = MeasurementOperator::new(cfg.build_mask(truth.shape())?);
    let clean = operator.forward(&truth)?;
    let sigma = match (cfg.noise.sigma, cfg.noise.snr_db) {
        (Some(s), _) => s,
        (None, Some(snr)) => sigma_for_snr(&clean, snr)?,
        (None, None) => 0.0,
    };
    let data = add_noise(&clean, sigma, cfg.noise.seed)?;
    Ok(Measurements {
        truth,
        operator,
        data,
        sigma,
    })
}

/// Ensembles and design fields.
#[derive(Debug, Clone)]
pub struct DesignStage {
    pub schedule: LambdaSchedule,
    pub ensemble_p1: Ensemble,
    pub ensemble_p2: Ensemble,
    pub fields: DesignFields,
}

pub fn run_design(cfg: &ExperimentConfig, m: &Measurements) -> Result<DesignStage> {
    let schedule = lambda_schedule(cfg.ensemble.schedule_seed, cfg.ensemble.size)?;
    let opts = cfg.solver.options();
    let rho = cfg.solver.rho;
    let ensemble_p1 = sample_ensemble(&m.operator, &m.data, 1.0, &schedule, rho, &opts)?;
    let ensemble_p2 = sample_ensemble(&m.operator, &m.data, 2.0, &schedule, rho, &opts)?;
    let fields = design_fields(&ensemble_p1, &ensemble_p2, &cfg.design)?;
    Ok(DesignStage {
        schedule,
        ensemble_p1,
        ensemble_p2,
        fields,
    })
}

/// Exponent and weight fields of `method`; `None` means uniform.
fn method_fields<'a>(
    method: Method,
    design: Option<&'a DesignFields>,
) -> Result<(Option<&'a RealField>, f64, Option<&'a RealField>)> {
    let need = || design.ok_or_else(|| Error::invalid(format!("{method} needs the design stage")));
    let (exponents, p) = match method.exponent {
        ExponentKind::P1 => (None, 1.0),
        ExponentKind::P2 => (None, 2.0),
        ExponentKind::Standard => (Some(&need()?.standard_exponents), 0.0),
        ExponentKind::Proposed => (Some(&need()?.exponents), 0.0),
    };
    let weights = match method.weight {
        WeightKind::Unit => None,
        WeightKind::Proposed => Some(&need()?.weights),
        // the p = 2 ensemble's spread matches the p = 2 solve; every other
        // method is compared against the p = 1 ensemble
        WeightKind::Vbjs if method.exponent == ExponentKind::P2 => Some(&need()?.vbjs_p2),
        WeightKind::Vbjs => Some(&need()?.vbjs_p1),
    };
    Ok((exponents, p, weights))
}

/// Solves one method at every candidate λ and keeps the smallest relative
/// ℓ2 error. The first candidate wins ties.
pub fn run_method(
    cfg: &ExperimentConfig,
    m: &Measurements,
    design: Option<&DesignFields>,
    method: Method,
    lambdas: &[f64],
) -> Result<MethodResult> {
    let n = m.truth.len();
    let (exps, p, ws) = method_fields(method, design)?;
    let exponents: Cow<[f64]> = match exps {
        Some(f) => Cow::Borrowed(f.values()),
        None => Cow::Owned(vec![p; n]),
    };
    let weights: Cow<[f64]> = match ws {
        Some(f) => Cow::Borrowed(f.values()),
        None => Cow::Owned(vec![1.0; n]),
    };
    let opts = cfg.solver.options();
    let mut best: Option<(f64, ErrorTriple, SolveReport)> = None;
    for &lambda in lambdas {
        let problem = WeightedProblem::new(
            &m.operator,
            &m.data,
            exponents.as_ref(),
            weights.as_ref(),
            lambda,
            cfg.solver.rho,
        )?;
        let report = solve(&problem, &opts)?;
        let errors = relative_errors(&report.solution, &m.truth)?;
        if best.as_ref().is_none_or(|b| errors[1] < b.1[1]) {
            best = Some((lambda, errors, report));
        }
    }
    let (lambda, errors, report) = best.ok_or_else(|| Error::invalid("no λ candidates"))?;
    Ok(MethodResult {
        method,
        lambda,
        errors,
        pointwise: pointwise_error(&report.solution, &m.truth)?,
        report,
    })
}

#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub config: ExperimentConfig,
    pub measurements: Measurements,
    pub schedule: LambdaSchedule,
    pub design: Option<DesignStage>,
    /// λ candidates tried for the final solves.
    pub lambdas: Vec<f64>,
    /// In config order.
    pub results: Vec<MethodResult>,
}

/// Measurement synthesis, design (when a method needs it) and all final
/// solves. Methods run concurrently; results keep config order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentOutput> {
    cfg.validate()?;
    let m = synthesize(cfg)?;
    let design = if cfg.methods.iter().any(|m| m.needs_design()) {
        Some(run_design(cfg, &m)?)
    } else {
        None
    };
    let schedule = match &design {
        Some(d) => d.schedule.clone(),
        None => lambda_schedule(cfg.ensemble.schedule_seed, cfg.ensemble.size)?,
    };
    let lambdas = match (cfg.solver.lambda, &cfg.lambda_sweep) {
        (Some(l), _) => vec![l],
        (None, Some(sweep)) => sweep.clone(),
        (None, None) => vec![schedule.geometric_center()],
    };
    let fields = design.as_ref().map(|d| &d.fields);
    let results = cfg
        .methods
        .par_iter()
        .map(|&method| run_method(cfg, &m, fields, method, &lambdas))
        .collect::<Result<Vec<_>>>()?;
    Ok(ExperimentOutput {
        config: cfg.clone(),
        measurements: m,
        schedule,
        design,
        lambdas,
        results,
    })
}

#[derive(Serialize)]
struct EnsembleRecord {
    exponent: f64,
    converged: usize,
    unconverged: usize,
    iterations: Vec<usize>,
}

impl From<&Ensemble> for EnsembleRecord {
    fn from(e: &Ensemble) -> Self {
        Self {
            exponent: e.exponent,
            converged: e.len() - e.unconverged(),
            unconverged: e.unconverged(),
            iterations: e.iterations.clone(),
        }
    }
}

#[derive(Serialize)]
struct MethodRecord {
    method: String,
    lambda: f64,
    relative_l1: f64,
    relative_l2: f64,
    relative_linf: f64,
    iterations: usize,
    converged: bool,
    objective: f64,
    final_primal_residual: Option<f64>,
    final_dual_residual: Option<f64>,
}

#[derive(Serialize)]
struct Provenance<'a> {
    version: &'static str,
    config: &'a ExperimentConfig,
    schedule_seed: u64,
    noise_seed: u64,
    noise_sigma: f64,
    grid: Vec<usize>,
    measurement_count: usize,
    schedule: &'a LambdaSchedule,
    lambda_candidates: &'a [f64],
    ensembles: Vec<EnsembleRecord>,
    methods: Vec<MethodRecord>,
}

#[derive(Serialize)]
struct DesignRecord<'a> {
    schedule_seed: u64,
    schedule: &'a LambdaSchedule,
    params: &'a DesignParams,
    patch_side: usize,
    ensembles: [EnsembleRecord; 2],
}

/// Sidecar for the design fields: schedule, thresholds, kernel and ensemble
/// convergence.
pub fn design_provenance_json(cfg: &ExperimentConfig, stage: &DesignStage) -> String {
    let record = DesignRecord {
        schedule_seed: cfg.ensemble.schedule_seed,
        schedule: &stage.schedule,
        params: &cfg.design,
        patch_side: stage.fields.partition.side(),
        ensembles: [(&stage.ensemble_p1).into(), (&stage.ensemble_p2).into()],
    };
    let mut s = serde_json::to_string_pretty(&record).expect("design record serializes");
    s.push('\n');
    s
}

impl ExperimentOutput {
    /// Deterministic provenance record: config, seeds, schedule, ensemble
    /// convergence and full-precision per-method results.
    pub fn provenance_json(&self) -> String {
        let ensembles = self
            .design
            .as_ref()
            .map(|d| vec![(&d.ensemble_p1).into(), (&d.ensemble_p2).into()])
            .unwrap_or_default();
        let methods = self
            .results
            .iter()
            .map(|r| MethodRecord {
                method: r.method.to_string(),
                lambda: r.lambda,
                relative_l1: r.errors[0],
                relative_l2: r.errors[1],
                relative_linf: r.errors[2],
                iterations: r.report.iterations,
                converged: r.report.converged,
                objective: r.report.objective,
                final_primal_residual: r.report.primal_residuals.last().copied(),
                final_dual_residual: r.report.dual_residuals.last().copied(),
            })
            .collect();
        let p = Provenance {
            version: env!("CARGO_PKG_VERSION"),
            config: &self.config,
            schedule_seed: self.config.ensemble.schedule_seed,
            noise_seed: self.config.noise.seed,
            noise_sigma: self.measurements.sigma,
            grid: self.measurements.truth.shape().to_vec(),
            measurement_count: self.measurements.operator.count(),
            schedule: &self.schedule,
            lambda_candidates: &self.lambdas,
            ensembles,
            methods,
        };
        let mut s = serde_json::to_string_pretty(&p).expect("provenance serializes");
        s.push('\n');
        s
    }

    pub fn errors_csv(&self) -> String {
        compare_table(&self.results)
    }

    /// Writes every artifact into `dir`, creating it if needed.
    pub fn write_artifacts(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let put = |name: &str, text: &str| {
            let path = dir.join(name);
            fs::write(&path, text).map_err(|e| Error::io(&path, e))
        };
        put("errors.csv", &self.errors_csv())?;
        put("provenance.json", &self.provenance_json())?;
        write_mask(dir, self.measurements.operator.mask())?;
        write_field(dir, "truth", &self.measurements.truth)?;
        for r in &self.results {
            write_field(dir, &format!("recon_{}", r.method), r.reconstruction())?;
            write_field(dir, &format!("pterr_{}", r.method), &r.pointwise)?;
        }
        if let Some(d) = &self.design {
            write_design(dir, &d.fields)?;
            put("design.json", &design_provenance_json(&self.config, d))?;
        }
        Ok(())
    }
}

pub(crate) fn write_field(dir: &Path, stem: &str, field: &RealField) -> Result<()> {
    write_csv(dir.join(format!("{stem}.csv")), field)?;
    write_pgm(dir.join(format!("{stem}.pgm")), field)
}

pub(crate) fn write_mask(dir: &Path, mask: &FrequencyMask) -> Result<()> {
    let path = dir.join("mask.json");
    let text = serde_json::to_string(&mask.to_json()).expect("mask serializes");
    fs::write(&path, text).map_err(|e| Error::io(&path, e))
}

/// `exponent`, `standard_exponent`, `weight`, `jump`, both VBJS weight
/// fields and the two label lists.
pub fn write_design(dir: &Path, fields: &DesignFields) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_field(dir, "exponent", &fields.exponents)?;
    write_field(dir, "standard_exponent", &fields.standard_exponents)?;
    write_field(dir, "weight", &fields.weights)?;
    write_field(dir, "jump", &fields.jump)?;
    write_field(dir, "vbjs_p1", &fields.vbjs_p1)?;
    write_field(dir, "vbjs_p2", &fields.vbjs_p2)?;
    for (name, labels) in [
        ("labels.json", &fields.labels),
        ("standard_labels.json", &fields.standard_labels),
    ] {
        let path = dir.join(name);
        let text = serde_json::to_string_pretty(&labels_json(labels)).expect("labels serialize");
        fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}
