//! `nvm-levy`: simulation and diagnostics for truncated NVM Lévy processes.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use config::ExperimentConfig;

#[derive(Debug)]
pub enum CliError {
    /// Expectation mismatch (exit 1).
    Mismatch(String),
    /// Invalid configuration or unsupported request (exit 2).
    Config(String),
    /// Filesystem failure (exit 3).
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Mismatch(_) => 1,
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Mismatch(m) => write!(f, "expectation not met: {m}"),
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<nvm_levy::Error> for CliError {
    fn from(e: nvm_levy::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(name = "nvm-levy", version, about = "Truncated shot-noise simulation and Gaussian-residual diagnostics for NVM Lévy processes")]
struct Cli {
    /// Worker threads for replicas (outputs do not depend on it).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write sample paths of the truncated subordinator, NVM process or SDE.
    Simulate {
        #[arg(value_enum)]
        kind: SimKind,
        #[command(flatten)]
        common: Common,
    },
    /// Standardised residual samples with a normality summary.
    ResidualHist {
        #[command(flatten)]
        common: Common,
    },
    /// Kolmogorov bound against ε with the fitted log-log slope.
    BoundCurve {
        #[command(flatten)]
        common: Common,
    },
    /// Gaussian-limit condition report; exit 1 if it differs from --expect.
    CheckCondition {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = ["gaussian_limit", "non_gaussian", "inconclusive"])]
        expect: Option<String>,
    },
    /// KS comparison of the truncated marginal at t = T with exact variates.
    VerifyMarginal {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = ["consistent", "inconsistent"], default_value = "consistent")]
        expect: String,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimKind {
    Subordinator,
    Nvm,
    Sde,
}

#[derive(Args, Debug, Default)]
struct Common {
    /// JSON config file (a manifest from an earlier run also works).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Bundled parameter set, fig1 .. fig11.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, env = "LEVY_SEED")]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = ["gamma", "tempered_stable", "gig"])]
    family: Option<String>,
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    mu_w: Option<f64>,
    #[arg(long)]
    sigma_w: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    horizon: Option<f64>,
    #[arg(long)]
    replicas: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, value_parser = ["none", "gaussian"])]
    residual_mode: Option<String>,
    #[arg(long)]
    floor_ratio: Option<f64>,
    #[arg(long)]
    eps_from: Option<f64>,
    #[arg(long)]
    eps_to: Option<f64>,
    #[arg(long)]
    per_decade: Option<usize>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    z0: Option<f64>,
    #[arg(long)]
    qq_levels: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
}

impl Common {
    fn resolve(&self) -> Result<ExperimentConfig, CliError> {
        let mut cfg = json!({ "epsilon": 1e-6 });
        if let Some(name) = &self.preset {
            let p = config::preset(name).ok_or_else(|| {
                CliError::Config(format!("unknown preset '{name}', expected one of {}", config::PRESETS.join(", ")))
            })?;
            config::merge(&mut cfg, &p);
        }
        if let Some(path) = &self.config {
            config::merge(&mut cfg, &config::load_file(path)?);
        }
        if let Some(f) = &self.family {
            config::set_family(&mut cfg, f)?;
        }
        let mut process = serde_json::Map::new();
        for (key, v) in [
            ("nu", self.nu),
            ("gamma", self.gamma),
            ("kappa", self.kappa),
            ("delta", self.delta),
            ("lambda", self.lambda),
            ("mu_w", self.mu_w),
            ("sigma_w", self.sigma_w),
        ] {
            if let Some(v) = v {
                process.insert(key.into(), json!(v));
            }
        }
        let mut top = serde_json::Map::new();
        if !process.is_empty() {
            top.insert("process".into(), Value::Object(process));
        }
        let mut put = |k: &str, v: Option<Value>| {
            if let Some(v) = v {
                top.insert(k.into(), v);
            }
        };
        put("seed", self.seed.map(|v| json!(v)));
        put("output_dir", self.out.as_ref().map(|v| json!(v)));
        put("epsilon", self.epsilon.map(|v| json!(v)));
        put("horizon", self.horizon.map(|v| json!(v)));
        put("replicas", self.replicas.map(|v| json!(v)));
        put("samples", self.samples.map(|v| json!(v)));
        put("residual_mode", self.residual_mode.as_ref().map(|v| json!(v)));
        put("floor_ratio", self.floor_ratio.map(|v| json!(v)));
        put("steps", self.steps.map(|v| json!(v)));
        put("z0", self.z0.map(|v| json!(v)));
        put("qq_levels", self.qq_levels.map(|v| json!(v)));
        put("alpha", self.alpha.map(|v| json!(v)));
        let mut grid = serde_json::Map::new();
        for (k, v) in [("from", self.eps_from), ("to", self.eps_to)] {
            if let Some(v) = v {
                grid.insert(k.into(), json!(v));
            }
        }
        if let Some(n) = self.per_decade {
            grid.insert("per_decade".into(), json!(n));
        }
        if !grid.is_empty() {
            let base = serde_json::to_value(config::EpsilonGrid::default()).expect("grid serialises");
            let mut g = cfg.get("epsilon_grid").cloned().unwrap_or(base);
            config::merge(&mut g, &Value::Object(grid));
            top.insert("epsilon_grid".into(), g);
        }
        config::merge(&mut cfg, &Value::Object(top));
        if cfg.get("process").is_none() {
            return Err(CliError::Config("no process given: use --preset, --config or --family".into()));
        }
        config::finish(cfg)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.jobs {
        if n == 0 {
            return Err(CliError::Config("--jobs must be >= 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    match cli.command {
        Command::Simulate { kind, common } => commands::simulate(kind, &common.resolve()?),
        Command::ResidualHist { common } => commands::residual_hist(&common.resolve()?),
        Command::BoundCurve { common } => commands::bound_curve(&common.resolve()?),
        Command::CheckCondition { common, expect } => commands::check_condition(&common.resolve()?, expect.as_deref()),
        Command::VerifyMarginal { common, expect } => commands::verify_marginal(&common.resolve()?, &expect),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nvm-levy: {e}");
            ExitCode::from(e.code())
        }
    }
}
