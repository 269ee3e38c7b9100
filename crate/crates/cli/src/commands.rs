use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use nvm_levy::bounds::{self, ConditionReport};
use nvm_levy::mc::try_replicate;
use nvm_levy::nvm::{build_nvm_path, ResidualSampler};
use nvm_levy::output;
use nvm_levy::rng::{standard_normal, stream};
use nvm_levy::sde::SdeSimulator;
use nvm_levy::specfun::{gamma, lower_incomplete_gamma, Tolerance};
use nvm_levy::stats::{self, ks_one_sample, ks_two_sample, normal_cdf, qq_points};
use nvm_levy::subordinators::{sample_exact_marginal, JumpSampler, SubordinatorSpec};
use serde::Serialize;
use serde_json::json;

use crate::config::ExperimentConfig;
use crate::{CliError, SimKind};

/// Stream index base for reference variates, disjoint from replica indices.
const REFERENCE_STREAM: u64 = 1 << 40;

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn write_file(dir: &Path, name: &str, body: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> Result<(), CliError> {
    let path = dir.join(name);
    let file = File::create(&path).map_err(|e| io_err(&path, e))?;
    let mut w = BufWriter::new(file);
    body(&mut w).and_then(|_| w.flush()).map_err(|e| io_err(&path, e))
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Config(format!("serialising {name}: {e}")))?;
    write_file(dir, name, |w| {
        w.write_all(text.as_bytes())?;
        w.write_all(b"\n")
    })
}

fn prepare(cfg: &ExperimentConfig) -> Result<&Path, CliError> {
    let dir = cfg.output_dir.as_path();
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    Ok(dir)
}

fn write_manifest(cfg: &ExperimentConfig, command: &str, outputs: &[String]) -> Result<(), CliError> {
    let manifest = json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "git_describe": env!("NVM_LEVY_GIT_DESCRIBE"),
        "config": cfg,
        "outputs": outputs,
    });
    write_json(&cfg.output_dir, "manifest.json", &manifest)
}

/// Report on stdout; a closed pipe is not an error.
fn print_json<T: Serialize>(value: &T) {
    let text = serde_json::to_string_pretty(value).expect("report serialises");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

pub fn simulate(kind: SimKind, cfg: &ExperimentConfig) -> Result<(), CliError> {
    let seed = cfg.seed()?;
    let nvm = cfg.process.nvm()?;
    let dir = prepare(cfg)?;
    let sampler = JumpSampler::with_z0(&nvm.subordinator, cfg.z0)?;
    let (eps, t) = (cfg.epsilon, cfg.horizon);
    let mut outputs = Vec::new();
    let name = |i: usize| format!("path_{i:04}.csv");
    let command = match kind {
        SimKind::Subordinator => {
            let paths = try_replicate(seed, cfg.replicas, |rng, _| sampler.sample(eps, t, rng))?;
            for (i, p) in paths.iter().enumerate() {
                write_file(dir, &name(i), |w| output::write_jump_series(w, p))?;
                outputs.push(name(i));
            }
            "simulate subordinator"
        }
        SimKind::Nvm => {
            let paths = try_replicate(seed, cfg.replicas, |rng, _| {
                let jumps = sampler.sample(eps, t, rng)?;
                Ok::<_, nvm_levy::Error>(build_nvm_path(&nvm, &jumps, rng))
            })?;
            for (i, p) in paths.iter().enumerate() {
                write_file(dir, &name(i), |w| output::write_nvm_path(w, p))?;
                outputs.push(name(i));
            }
            "simulate nvm"
        }
        SimKind::Sde => {
            let model = cfg.sde.model(t)?;
            let sim = SdeSimulator::new(&model, &nvm, eps, cfg.residual_mode)?;
            let grid: Vec<f64> = (0..=cfg.steps).map(|k| t * k as f64 / cfg.steps as f64).collect();
            let x0 = cfg.sde.x0();
            let paths = try_replicate(seed, cfg.replicas, |rng, _| sim.run(&grid, &x0, rng))?;
            for (i, p) in paths.iter().enumerate() {
                write_file(dir, &name(i), |w| output::write_sde_path(w, p))?;
                outputs.push(name(i));
            }
            "simulate sde"
        }
    };
    outputs.push("manifest.json".into());
    write_manifest(cfg, command, &outputs)?;
    eprintln!("wrote {} files to {}", outputs.len(), dir.display());
    Ok(())
}

fn reference_normals(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = stream(seed, REFERENCE_STREAM);
    (0..n).map(|_| standard_normal(&mut rng)).collect()
}

pub fn residual_hist(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let seed = cfg.seed()?;
    let nvm = cfg.process.nvm()?;
    let dir = prepare(cfg)?;
    let t = cfg.horizon;
    let sampler = ResidualSampler::new(&nvm, cfg.epsilon, cfg.epsilon * cfg.floor_ratio)?;
    // Y_ε(t) has variance t; rescale to unit variance
    let y = try_replicate(seed, cfg.samples, |rng, _| sampler.sample(t, rng).map(|v| v / t.sqrt()))?;
    let ks = ks_one_sample(&y, normal_cdf)?;
    let moments = stats::moments(&y, seed)?;
    let qq = qq_points(&y, &reference_normals(seed, cfg.samples), cfg.qq_levels)?;
    let bound = if cfg.epsilon <= 1.0 {
        Some(bounds::kolmogorov_bound_general(&nvm, cfg.epsilon, Tolerance::QUADRATURE)?)
    } else {
        None
    };
    let summary = json!({
        "family": nvm.subordinator.family(),
        "epsilon": cfg.epsilon,
        "floor": sampler.floor(),
        "neglected_variance_fraction": sampler.neglected_variance_fraction(),
        "horizon": t,
        "samples": cfg.samples,
        "ks": ks,
        "moments": moments,
        "alpha": cfg.alpha,
        "normal_at_alpha": ks.p_value > cfg.alpha,
        "kurtosis_ci_excludes_zero": moments.kurtosis_ci99.0 > 0.0 || moments.kurtosis_ci99.1 < 0.0,
        "kolmogorov_bound": bound,
    });
    write_file(dir, "residuals.csv", |w| output::write_column(w, "y", &y))?;
    write_file(dir, "qq.csv", |w| output::write_pairs(w, ("residual", "normal"), &qq))?;
    write_json(dir, "summary.json", &summary)?;
    write_manifest(cfg, "residual-hist", &["residuals.csv".into(), "qq.csv".into(), "summary.json".into(), "manifest.json".into()])?;
    print_json(&summary);
    Ok(())
}

pub fn bound_curve(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let nvm = cfg.process.nvm()?;
    let dir = prepare(cfg)?;
    let grid = cfg.epsilon_grid.points();
    let curve = bounds::bound_curve(&nvm, &grid, cfg.z0)?;
    let branch = match nvm.subordinator {
        SubordinatorSpec::Gig { lambda, delta, gamma } => Some(
            bounds::gh_bound(lambda, delta, gamma, nvm.mu_w, nvm.sigma_w, cfg.z0, grid[0])?.branch,
        ),
        _ => None,
    };
    let summary = json!({
        "family": curve.family,
        "asymptotic_slope": curve.asymptotic_slope,
        "gh_branch": branch,
        "points": curve.points.len(),
    });
    write_file(dir, "bound_curve.csv", |w| output::write_bound_curve(w, &curve))?;
    write_json(dir, "summary.json", &summary)?;
    write_manifest(cfg, "bound-curve", &["bound_curve.csv".into(), "summary.json".into(), "manifest.json".into()])?;
    print_json(&summary);
    Ok(())
}

pub fn check_condition(cfg: &ExperimentConfig, expect: Option<&str>) -> Result<(), CliError> {
    let nvm = cfg.process.nvm()?;
    let dir = prepare(cfg)?;
    let grid = cfg.epsilon_grid.points();
    let report: ConditionReport = bounds::condition_report(&nvm.subordinator, &grid)?;
    let necessity = bounds::necessity_functionals(&nvm, &grid)?;
    write_json(dir, "condition.json", &report)?;
    write_json(dir, "necessity.json", &necessity)?;
    write_manifest(cfg, "check-condition", &["condition.json".into(), "necessity.json".into(), "manifest.json".into()])?;
    print_json(&report);
    match expect {
        Some(want) if want != report.verdict.as_str() => {
            Err(CliError::Mismatch(format!("verdict {} but expected {want}", report.verdict.as_str())))
        }
        _ => Ok(()),
    }
}

pub fn verify_marginal(cfg: &ExperimentConfig, expect: &str) -> Result<(), CliError> {
    let seed = cfg.seed()?;
    let spec = cfg.process.subordinator;
    let dir = prepare(cfg)?;
    let (eps, t, n) = (cfg.epsilon, cfg.horizon, cfg.samples);
    let sampler = JumpSampler::with_z0(&spec, cfg.z0)?;
    // fail on an unsupported exact marginal before the expensive series run
    sample_exact_marginal(&spec, t, &mut stream(seed, REFERENCE_STREAM))?;
    let x = try_replicate(seed, n, |rng, _| sampler.sample(eps, t, rng).map(|s| s.total()))?;
    let exact = try_replicate(seed ^ REFERENCE_STREAM, n, |rng, _| sample_exact_marginal(&spec, t, rng))?;
    let (method, ks) = match spec {
        SubordinatorSpec::Gamma { nu, gamma: g } => {
            let (shape, rate) = (nu * t, 0.5 * g * g);
            let norm = gamma(shape);
            let cdf = |v: f64| if v <= 0.0 { 0.0 } else { lower_incomplete_gamma(shape, rate * v).map_or(f64::NAN, |p| (p / norm).min(1.0)) };
            ("one_sample_exact_cdf", ks_one_sample(&x, cdf)?)
        }
        _ => ("two_sample_exact_variates", ks_two_sample(&x, &exact)?),
    };
    let qq = qq_points(&x, &exact, cfg.qq_levels)?;
    let consistent = ks.p_value > cfg.alpha;
    let report = json!({
        "family": spec.family(),
        "epsilon": eps,
        "horizon": t,
        "method": method,
        "ks": ks,
        "alpha": cfg.alpha,
        "consistent": consistent,
    });
    write_file(dir, "marginal.csv", |w| output::write_column(w, "x", &x))?;
    write_file(dir, "qq.csv", |w| output::write_pairs(w, ("truncated", "exact"), &qq))?;
    write_json(dir, "ks.json", &report)?;
    write_manifest(cfg, "verify-marginal", &["marginal.csv".into(), "qq.csv".into(), "ks.json".into(), "manifest.json".into()])?;
    print_json(&report);
    let got = if consistent { "consistent" } else { "inconsistent" };
    if got != expect {
        return Err(CliError::Mismatch(format!("marginal is {got} at alpha = {} but expected {expect}", cfg.alpha)));
    }
    Ok(())
}

