use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::design::DesignParams;
use crate::error::{Error, Result};
use crate::grid::Shape;
use crate::operators::{Axis, FrequencyMask, MaskRule};
use crate::phantoms::{PhantomId, PhantomSpec};
use crate::solver::{Init, SolverOptions};

/// Exponent field used by a method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExponentKind {
    /// Homogeneous `p ≡ 1`.
    P1,
    /// Homogeneous `p ≡ 2`.
    P2,
    /// Patch classification only.
    Standard,
    /// Patch classification corrected by the jump indicator.
    Proposed,
}

/// Weight field used by a method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightKind {
    Unit,
    /// Linear in the jump indicator.
    Proposed,
    /// Reciprocal ensemble variance.
    Vbjs,
}

/// One row of the comparison, e.g. `proposed+weight` or `p2+vbjs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Method {
    pub exponent: ExponentKind,
    pub weight: WeightKind,
}

impl Method {
    pub const fn new(exponent: ExponentKind, weight: WeightKind) -> Self {
        Self { exponent, weight }
    }

    /// Every method, in canonical order.
    pub fn all() -> Vec<Method> {
        let mut out = Vec::with_capacity(12);
        for e in [ExponentKind::P1, ExponentKind::P2, ExponentKind::Standard, ExponentKind::Proposed] {
            for w in [WeightKind::Unit, WeightKind::Proposed, WeightKind::Vbjs] {
                out.push(Method::new(e, w));
            }
        }
        out
    }

    /// Needs the sample ensembles and the design fields.
    pub fn needs_design(self) -> bool {
        !(matches!(self.exponent, ExponentKind::P1 | ExponentKind::P2) && self.weight == WeightKind::Unit)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = match self.exponent {
            ExponentKind::P1 => "p1",
            ExponentKind::P2 => "p2",
            ExponentKind::Standard => "standard",
            ExponentKind::Proposed => "proposed",
        };
        match self.weight {
            WeightKind::Unit => write!(f, "{e}"),
            WeightKind::Proposed => write!(f, "{e}+weight"),
            WeightKind::Vbjs => write!(f, "{e}+vbjs"),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (e, w) = s.split_once('+').unwrap_or((s, ""));
        let exponent = match e {
            "p1" => ExponentKind::P1,
            "p2" => ExponentKind::P2,
            "standard" => ExponentKind::Standard,
            "proposed" => ExponentKind::Proposed,
            _ => return Err(Error::invalid(format!("unknown method {s:?}"))),
        };
        let weight = match w {
            "" => WeightKind::Unit,
            "weight" => WeightKind::Proposed,
            "vbjs" => WeightKind::Vbjs,
            _ => return Err(Error::invalid(format!("unknown weight in method {s:?}"))),
        };
        Ok(Method::new(exponent, weight))
    }
}

impl TryFrom<String> for Method {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Method> for String {
    fn from(m: Method) -> String {
        m.to_string()
    }
}

/// Measurement noise; at most one of `sigma` and `snr_db`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseConfig {
    pub sigma: Option<f64>,
    pub snr_db: Option<f64>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    /// λ of the final solves; overrides both the sweep and the schedule center.
    pub lambda: Option<f64>,
    pub rho: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_iter: usize,
    pub init: Init,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let o = SolverOptions::default();
        Self {
            lambda: None,
            rho: 1.0,
            abs_tol: o.abs_tol,
            rel_tol: o.rel_tol,
            max_iter: o.max_iter,
            init: o.init,
        }
    }
}

impl SolverConfig {
    pub fn options(&self) -> SolverOptions {
        SolverOptions {
            abs_tol: self.abs_tol,
            rel_tol: self.rel_tol,
            max_iter: self.max_iter,
            init: self.init,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnsembleConfig {
    /// Members per ensemble, `C`.
    pub size: usize,
    pub schedule_seed: u64,
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        Self {
            size: 50,
            schedule_seed: 0,
        }
    }
}

/// Everything one comparison run depends on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub phantom: PhantomSpec,
    #[serde(default = "default_mask")]
    pub mask: MaskRule,
    #[serde(default)]
    pub noise: NoiseConfig,
    #[serde(default)]
    pub design: DesignParams,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub ensemble: EnsembleConfig,
    /// Candidate λ values for the final solves. Each method keeps the one
    /// with the smallest relative ℓ2 error against the phantom.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_sweep: Option<Vec<f64>>,
    pub methods: Vec<Method>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
}

fn default_mask() -> MaskRule {
    MaskRule::LowFreq {
        axis: Axis::Y,
        fraction: 0.391,
    }
}

impl ExperimentConfig {
    /// Defaults around a phantom and a method list.
    pub fn new(phantom: PhantomSpec, methods: Vec<Method>) -> Self {
        Self {
            phantom,
            mask: default_mask(),
            noise: NoiseConfig::default(),
            design: DesignParams::default(),
            solver: SolverConfig::default(),
            ensemble: EnsembleConfig::default(),
            lambda_sweep: None,
            methods,
            out_dir: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::invalid(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Builds the frequency mask for a grid of `shape`.
    pub fn build_mask(&self, shape: Shape) -> Result<FrequencyMask> {
        match self.mask {
            MaskRule::LowFreq { axis, fraction } => FrequencyMask::lowfreq_axis(shape, axis, fraction),
            MaskRule::Stride { axis, stride } => FrequencyMask::stride_axis(shape, axis, stride),
            MaskRule::Full => FrequencyMask::full(shape),
            MaskRule::Explicit => Err(Error::invalid("mask.rule: explicit masks cannot be configured")),
        }
    }

    /// Range checks with the offending field path in the message.
    pub fn validate(&self) -> Result<()> {
        let bad = |path: &str, msg: &str| Err(Error::invalid(format!("{path}: {msg}")));
        if self.methods.is_empty() {
            return bad("methods", "at least one method is required");
        }
        for (i, m) in self.methods.iter().enumerate() {
            if self.methods[..i].contains(m) {
                return bad("methods", &format!("{m} is listed twice"));
            }
        }
        if self.phantom.id == PhantomId::File && self.phantom.path.is_none() {
            return bad("phantom.path", "required when phantom.id is \"file\"");
        }
        if self.phantom.id != PhantomId::File && self.phantom.size < 32 {
            return bad("phantom.size", "must be at least 32");
        }
        if self.phantom.size == 0 {
            return bad("phantom.size", "must be positive");
        }
        match self.mask {
            MaskRule::LowFreq { fraction, .. } if !(fraction > 0.0 && fraction <= 1.0) => {
                return bad("mask.fraction", "must lie in (0, 1]");
            }
            MaskRule::Stride { stride: 0, .. } => return bad("mask.stride", "must be positive"),
            MaskRule::Explicit => return bad("mask.rule", "explicit masks cannot be configured"),
            _ => {}
        }
        match (self.noise.sigma, self.noise.snr_db) {
            (Some(_), Some(_)) => return bad("noise", "give sigma or snr_db, not both"),
            (Some(s), None) if !(s >= 0.0 && s.is_finite()) => {
                return bad("noise.sigma", "must be finite and >= 0");
            }
            (None, Some(s)) if !s.is_finite() => return bad("noise.snr_db", "must be finite"),
            _ => {}
        }
        self.design
            .validate()
            .map_err(|e| Error::invalid(format!("design: {e}")))?;
        let s = &self.solver;
        if let Some(l) = s.lambda {
            if !(l > 0.0 && l.is_finite()) {
                return bad("solver.lambda", "must be positive");
            }
        }
        if !(s.rho > 0.0 && s.rho.is_finite()) {
            return bad("solver.rho", "must be positive");
        }
        if !(s.abs_tol > 0.0 && s.rel_tol >= 0.0) {
            return bad("solver.abs_tol", "tolerances must be positive");
        }
        if s.max_iter == 0 {
            return bad("solver.max_iter", "must be positive");
        }
        if self.ensemble.size < 2 {
            return bad("ensemble.size", "must be at least 2");
        }
        if let Some(sweep) = &self.lambda_sweep {
            if sweep.is_empty() || sweep.iter().any(|l| !(*l > 0.0 && l.is_finite())) {
                return bad("lambda_sweep", "must hold positive values");
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_names_round_trip() {
        let all = Method::all();
        assert_eq!(all.len(), 12);
        for m in all {
            assert_eq!(m.to_string().parse::<Method>().unwrap(), m);
        }
        assert_eq!("proposed+weight".parse::<Method>().unwrap(), Method::new(ExponentKind::Proposed, WeightKind::Proposed));
        assert!("p3".parse::<Method>().is_err());
        assert!("p1+foo".parse::<Method>().is_err());
        assert!(!"p2".parse::<Method>().unwrap().needs_design());
        assert!("p2+vbjs".parse::<Method>().unwrap().needs_design());
    }

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = ExperimentConfig::from_json(r#"{"phantom":{"id":"A","size":64},"methods":["p1"]}"#).unwrap();
        assert_eq!(cfg.mask, default_mask());
        assert_eq!(cfg.ensemble.size, 50);
        assert_eq!(cfg.solver.rho, 1.0);
        assert_eq!(cfg.design.tau, 0.35);
        let again = ExperimentConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn validation_names_the_field() {
        let base = r#"{"phantom":{"id":"A","size":64},"methods":["p1"]"#;
        let err = |extra: &str| {
            ExperimentConfig::from_json(&format!("{base}{extra}}}"))
                .unwrap_err()
                .to_string()
        };
        assert!(err(r#","noise":{"sigma":1,"snr_db":20}"#).contains("noise"));
        assert!(err(r#","solver":{"rho":0}"#).contains("solver.rho"));
        assert!(err(r#","ensemble":{"size":1}"#).contains("ensemble.size"));
        assert!(err(r#","mask":{"rule":"lowfreq","axis":"y","fraction":1.5}"#).contains("mask.fraction"));
        assert!(err(r#","design":{"tau":2}"#).contains("design"));
        assert!(err(r#","bogus":1"#).contains("bogus"));
        assert!(ExperimentConfig::from_json(r#"{"phantom":{"id":"A","size":64},"methods":[]}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"phantom":{"id":"A","size":64},"methods":["p1","p1"]}"#).is_err());
    }
}
