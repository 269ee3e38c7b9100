use std::f64::consts::SQRT_2;
use std::path::{Path, PathBuf};

use nvm_levy::nvm::NvmSpec;
use nvm_levy::sde::{LinearSdeModel, Matrix, ResidualMode, Vector, MAX_DIM};
use nvm_levy::subordinators::SubordinatorSpec;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProcessConfig {
    #[serde(flatten)]
    pub subordinator: SubordinatorSpec,
    pub mu_w: f64,
    pub sigma_w: f64,
}

impl ProcessConfig {
    pub fn nvm(&self) -> Result<NvmSpec, CliError> {
        NvmSpec::new(self.subordinator, self.mu_w, self.sigma_w).map_err(CliError::from)
    }
}

/// Decreasing log-spaced grid from `from` down to `to`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpsilonGrid {
    pub from: f64,
    pub to: f64,
    pub per_decade: usize,
}

impl Default for EpsilonGrid {
    fn default() -> Self {
        EpsilonGrid { from: 1e-2, to: 1e-8, per_decade: 2 }
    }
}

impl EpsilonGrid {
    pub fn points(&self) -> Vec<f64> {
        let decades = (self.from / self.to).log10();
        let n = (decades * self.per_decade as f64).round() as usize;
        (0..=n).map(|k| self.from * 10f64.powf(-(k as f64) / self.per_decade as f64)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SdeConfig {
    pub a: Vec<Vec<f64>>,
    pub h: Vec<f64>,
    #[serde(default)]
    pub x0: Option<Vec<f64>>,
}

impl Default for SdeConfig {
    fn default() -> Self {
        SdeConfig { a: vec![vec![0.0, 1.0], vec![0.0, -1.0]], h: vec![0.0, 1.0], x0: None }
    }
}

impl SdeConfig {
    pub fn model(&self, horizon: f64) -> Result<LinearSdeModel, CliError> {
        let p = self.h.len();
        if !(1..=MAX_DIM).contains(&p) || self.a.len() != p || self.a.iter().any(|r| r.len() != p) {
            return Err(CliError::Config(format!("sde.a must be P x P and sde.h length P with 1 <= P <= {MAX_DIM}")));
        }
        let a = Matrix::from_fn(p, p, |i, j| self.a[i][j]);
        LinearSdeModel::new(a, Vector::from_column_slice(&self.h), horizon).map_err(CliError::from)
    }

    pub fn x0(&self) -> Vec<f64> {
        self.x0.clone().unwrap_or_else(|| vec![0.0; self.h.len()])
    }
}

fn d_one() -> f64 {
    1.0
}
fn d_replicas() -> usize {
    10
}
fn d_samples() -> usize {
    10_000
}
fn d_out() -> PathBuf {
    PathBuf::from("out")
}
fn d_floor() -> f64 {
    nvm_levy::nvm::DEFAULT_FLOOR_RATIO
}
fn d_steps() -> usize {
    100
}
fn d_qq() -> usize {
    100
}
fn d_alpha() -> f64 {
    0.01
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub process: ProcessConfig,
    /// Truncation level ε.
    pub epsilon: f64,
    /// Horizon T; also the evaluation time for marginals and residuals.
    #[serde(default = "d_one")]
    pub horizon: f64,
    /// Number of path files written by `simulate`.
    #[serde(default = "d_replicas")]
    pub replicas: usize,
    /// Sample size N for `residual-hist` and `verify-marginal`.
    #[serde(default = "d_samples")]
    pub samples: usize,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default = "d_out")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub residual_mode: ResidualMode,
    /// ε_floor/ε for residual simulation.
    #[serde(default = "d_floor")]
    pub floor_ratio: f64,
    #[serde(default)]
    pub epsilon_grid: EpsilonGrid,
    /// Uniform time steps on [0, T] for SDE paths.
    #[serde(default = "d_steps")]
    pub steps: usize,
    #[serde(default)]
    pub sde: SdeConfig,
    /// GIG envelope / GH bound point z₀; defaults per λ.
    #[serde(default)]
    pub z0: Option<f64>,
    #[serde(default = "d_qq")]
    pub qq_levels: usize,
    #[serde(default = "d_alpha")]
    pub alpha: f64,
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        self.process.nvm()?;
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(bad(format!("epsilon must be finite and > 0, got {}", self.epsilon)));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(bad(format!("horizon must be finite and > 0, got {}", self.horizon)));
        }
        if self.replicas == 0 {
            return Err(bad("replicas must be >= 1"));
        }
        if self.samples < 20 {
            return Err(bad(format!("samples must be >= 20, got {}", self.samples)));
        }
        if !(self.floor_ratio > 0.0 && self.floor_ratio < 1.0) {
            return Err(bad(format!("floor_ratio must lie in (0, 1), got {}", self.floor_ratio)));
        }
        let g = &self.epsilon_grid;
        if !(g.to > 0.0 && g.from > g.to && g.from.is_finite()) || g.per_decade == 0 {
            return Err(bad("epsilon_grid needs from > to > 0 and per_decade >= 1"));
        }
        if self.steps == 0 {
            return Err(bad("steps must be >= 1"));
        }
        self.sde.model(self.horizon)?;
        if self.sde.x0().len() != self.sde.h.len() {
            return Err(bad("sde.x0 must have the state dimension"));
        }
        if let Some(z0) = self.z0 {
            if !(z0 > 0.0 && z0.is_finite()) {
                return Err(bad(format!("z0 must be finite and > 0, got {z0}")));
            }
        }
        if self.qq_levels < 2 {
            return Err(bad("qq_levels must be >= 2"));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(bad(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        Ok(())
    }

    pub fn seed(&self) -> Result<u64, CliError> {
        self.seed.ok_or_else(|| bad("a seed is required: pass --seed, set LEVY_SEED, or put \"seed\" in the config"))
    }
}

/// Parameters used when a family is named without its full parameter set.
pub fn family_defaults(family: &str) -> Option<Value> {
    Some(match family {
        "gamma" => json!({"family": "gamma", "nu": 2.0, "gamma": SQRT_2}),
        "tempered_stable" => json!({"family": "tempered_stable", "kappa": 0.5, "delta": 1.0, "gamma": 1.35}),
        "gig" => json!({"family": "gig", "lambda": 0.2, "delta": 1.3, "gamma": SQRT_2}),
        _ => return None,
    })
}

pub const PRESETS: [&str; 11] = ["fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11"];

pub fn preset(name: &str) -> Option<Value> {
    let proc = |family: &str| {
        let mut p = family_defaults(family).unwrap();
        p["mu_w"] = json!(1.0);
        p["sigma_w"] = json!(2.0);
        p
    };
    let paths = |family: &str, samples: usize| {
        let mut p = proc(family);
        if family == "gig" {
            p["delta"] = json!(1.0 / 3.0);
        }
        json!({"process": p, "epsilon": 1e-10, "replicas": 10, "samples": samples})
    };
    let residual = |family: &str, samples: usize| json!({"process": proc(family), "epsilon": 1e-6, "samples": samples});
    let bound = |family: &str| {
        json!({"process": proc(family), "epsilon": 1e-6,
               "epsilon_grid": {"from": 1e-2, "to": 1e-6, "per_decade": 4}})
    };
    Some(match name {
        "fig1" => paths("gamma", 100_000),
        "fig2" => paths("tempered_stable", 100_000),
        "fig3" => paths("gig", 40_000),
        "fig4" => residual("gamma", 10_000),
        "fig5" => residual("gamma", 100_000),
        "fig6" | "fig7" => residual("tempered_stable", 100_000),
        "fig8" => bound("tempered_stable"),
        "fig9" | "fig10" => residual("gig", 50_000),
        "fig11" => bound("gig"),
        _ => return None,
    })
}

/// Reads a config file. A manifest written by this tool is accepted too and
/// its embedded config is used.
pub fn load_file(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| bad(format!("{}: {e}", path.display())))?;
    match v.get("config") {
        Some(inner) if v.get("command").is_some() => Ok(inner.clone()),
        _ => Ok(v),
    }
}

/// Deep merge of `patch` into `base`; objects merge key by key.
pub fn merge(base: &mut Value, patch: &Value) {
    match (base, patch) {
        (Value::Object(b), Value::Object(p)) => {
            for (k, v) in p {
                merge(b.entry(k.clone()).or_insert(Value::Null), v);
            }
        }
        (b, p) => *b = p.clone(),
    }
}

/// Sets `process.family`, replacing the process parameters with the family
/// defaults when the family changes.
pub fn set_family(cfg: &mut Value, family: &str) -> Result<(), CliError> {
    let defaults = family_defaults(family).ok_or_else(|| bad(format!("unknown family '{family}'")))?;
    let obj = cfg.as_object_mut().ok_or_else(|| bad("config must be a JSON object"))?;
    let process = obj.entry("process").or_insert_with(|| Value::Object(Map::new()));
    let same = process.get("family").and_then(Value::as_str) == Some(family);
    if !same {
        let mu = process.get("mu_w").cloned().unwrap_or(json!(1.0));
        let sigma = process.get("sigma_w").cloned().unwrap_or(json!(2.0));
        *process = defaults;
        process["mu_w"] = mu;
        process["sigma_w"] = sigma;
    }
    Ok(())
}

pub fn finish(value: Value) -> Result<ExperimentConfig, CliError> {
    let cfg: ExperimentConfig = serde_json::from_value(value).map_err(|e| bad(format!("invalid config: {e}")))?;
    cfg.validate()?;
    Ok(cfg)
}
