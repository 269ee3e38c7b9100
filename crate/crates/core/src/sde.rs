//! Linear SDEs dX = AX dt + h dW_X(t) driven by an NVM Lévy process, simulated
//! from the truncated shot-noise series with an optional Gaussian residual.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::nvm::{build_nvm_path, residual_moments, NvmEvent, NvmPath, NvmSpec, ResidualMoments};
use crate::rng::{standard_normal, StreamRng};
use crate::specfun::Tolerance;
use crate::subordinators::JumpSampler;

pub const MAX_DIM: usize = 8;

pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct RawModel {
    a: Vec<Vec<f64>>,
    h: Vec<f64>,
    horizon: f64,
}

/// Drift matrix A (P×P), loading h (P), horizon T.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawModel", into = "RawModel")]
pub struct LinearSdeModel {
    a: DMatrix<f64>,
    h: DVector<f64>,
    horizon: f64,
}

impl TryFrom<RawModel> for LinearSdeModel {
    type Error = Error;
    fn try_from(raw: RawModel) -> Result<Self> {
        let p = raw.h.len();
        if raw.a.len() != p || raw.a.iter().any(|row| row.len() != p) {
            return Err(domain(format!("A must be {p}x{p} to match h")));
        }
        let a = DMatrix::from_fn(p, p, |i, j| raw.a[i][j]);
        LinearSdeModel::new(a, DVector::from_vec(raw.h), raw.horizon)
    }
}

impl From<LinearSdeModel> for RawModel {
    fn from(m: LinearSdeModel) -> Self {
        let p = m.dim();
        RawModel {
            a: (0..p).map(|i| (0..p).map(|j| m.a[(i, j)]).collect()).collect(),
            h: m.h.iter().copied().collect(),
            horizon: m.horizon,
        }
    }
}

impl LinearSdeModel {
    pub fn new(a: DMatrix<f64>, h: DVector<f64>, horizon: f64) -> Result<Self> {
        let p = h.len();
        if !(1..=MAX_DIM).contains(&p) {
            return Err(domain(format!("state dimension must be in 1..={MAX_DIM}, got {p}")));
        }
        if a.nrows() != p || a.ncols() != p {
            return Err(domain(format!("A is {}x{}, expected {p}x{p}", a.nrows(), a.ncols())));
        }
        if a.iter().chain(h.iter()).any(|v| !v.is_finite()) {
            return Err(domain("A and h must be finite"));
        }
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(domain(format!("horizon must be finite and > 0, got {horizon}")));
        }
        Ok(LinearSdeModel { a, h, horizon })
    }

    /// A = [[0, 1], [0, −θ]], h = (0, 1).
    pub fn langevin(theta: f64, horizon: f64) -> Result<Self> {
        Self::new(DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, -theta]), DVector::from_vec(vec![0.0, 1.0]), horizon)
    }

    pub fn dim(&self) -> usize {
        self.h.len()
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn h(&self) -> &DVector<f64> {
        &self.h
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    fn check_interval(&self, s: f64, t: f64) -> Result<()> {
        if !(0.0 <= s && s < t && t <= self.horizon) {
            return Err(domain(format!("need 0 <= s < t <= {}, got s = {s}, t = {t}", self.horizon)));
        }
        Ok(())
    }
}

/// e^{At}, Padé scaling and squaring.
pub fn matrix_exp(a: &DMatrix<f64>, t: f64) -> Result<DMatrix<f64>> {
    if !a.is_square() {
        return Err(domain("matrix_exp needs a square matrix"));
    }
    if !t.is_finite() || a.iter().any(|v| !v.is_finite()) {
        return Err(domain("matrix_exp needs finite input"));
    }
    if t == 0.0 {
        return Ok(DMatrix::identity(a.nrows(), a.ncols()));
    }
    let e = (a * t).exp();
    if e.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric { what: "matrix exponential", estimate: f64::INFINITY, error: f64::INFINITY });
    }
    Ok(e)
}

fn propagate(model: &LinearSdeModel, events: impl Iterator<Item = NvmEvent>, t: f64) -> Result<DVector<f64>> {
    let mut acc = DVector::zeros(model.dim());
    for e in events {
        acc += matrix_exp(&model.a, t - e.v)? * &model.h * e.x;
    }
    Ok(acc)
}

/// Σ Xᵢ e^{A(t−Vᵢ)} h over events with Vᵢ ∈ (s, t].
pub fn shot_noise_integral(model: &LinearSdeModel, path: &NvmPath, s: f64, t: f64) -> Result<DVector<f64>> {
    if !(0.0 <= s && s < t && t <= path.horizon) {
        return Err(domain(format!("need 0 <= s < t <= {}, got s = {s}, t = {t}", path.horizon)));
    }
    propagate(model, path.events.iter().copied().filter(|e| e.v > s && e.v <= t), t)
}

/// ∫₀^Δ e^{Aτ}h dτ and ∫₀^Δ e^{Aτ}hhᵀe^{Aᵀτ} dτ by block exponentials.
pub fn loading_integrals(model: &LinearSdeModel, dt: f64) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let p = model.dim();
    let mut m = DMatrix::zeros(p + 1, p + 1);
    m.view_mut((0, 0), (p, p)).copy_from(&model.a);
    m.view_mut((0, p), (p, 1)).copy_from(&model.h);
    let mean = matrix_exp(&m, dt)?.view((0, p), (p, 1)).clone_owned().column(0).into_owned();

    let mut c = DMatrix::zeros(2 * p, 2 * p);
    c.view_mut((0, 0), (p, p)).copy_from(&(-&model.a));
    c.view_mut((0, p), (p, p)).copy_from(&(&model.h * model.h.transpose()));
    c.view_mut((p, p), (p, p)).copy_from(&model.a.transpose());
    let f = matrix_exp(&c, dt)?;
    let q = f.view((p, p), (p, p)).transpose() * f.view((0, p), (p, p));
    let q = (&q + q.transpose()) * 0.5;
    Ok((mean, q))
}

fn scaled_moments(model: &LinearSdeModel, rates: &ResidualMoments, dt: f64) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let (m, q) = loading_integrals(model, dt)?;
    Ok((m * rates.mean_rate, q * rates.var_rate))
}

/// Mean and covariance of R_ε(s, t) = ∫ₛᵗ e^{A(t−u)}h dX_ε(u).
pub fn residual_sde_moments(
    model: &LinearSdeModel,
    nvm: &NvmSpec,
    eps: f64,
    s: f64,
    t: f64,
    tol: Tolerance,
) -> Result<(DVector<f64>, DMatrix<f64>)> {
    model.check_interval(s, t)?;
    scaled_moments(model, &residual_moments(nvm, eps, tol)?, t - s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ResidualMode {
    #[default]
    None,
    Gaussian,
}

impl std::str::FromStr for ResidualMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "none" => Ok(ResidualMode::None),
            "gaussian" => Ok(ResidualMode::Gaussian),
            other => Err(format!("unknown residual mode '{other}'")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SdePath {
    pub grid: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub residual_mode: ResidualMode,
}

impl SdePath {
    pub fn terminal(&self) -> &[f64] {
        self.states.last().expect("path has at least one state")
    }
}

/// Lower Cholesky factor after adding 1e−12·trace to the diagonal.
fn jittered_cholesky(cov: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let jitter = 1e-12 * cov.trace().max(0.0);
    let mut c = cov.clone();
    for i in 0..c.nrows() {
        c[(i, i)] += jitter;
    }
    if jitter == 0.0 {
        return Ok(DMatrix::zeros(c.nrows(), c.ncols()));
    }
    c.cholesky().map(|ch| ch.l()).ok_or(Error::Numeric {
        what: "cholesky of residual covariance",
        estimate: cov.trace(),
        error: jitter,
    })
}

struct StepCache {
    dt: f64,
    flow: DMatrix<f64>,
    mean: DVector<f64>,
    chol: DMatrix<f64>,
}

/// Simulates X on `grid` from x0. Each step draws a fresh truncated series
/// over (t_k, t_{k+1}] and, in gaussian mode, adds a N(mean, cov) draw with
/// the residual moments of that step.
pub fn simulate_sde(
    model: &LinearSdeModel,
    nvm: &NvmSpec,
    eps: f64,
    grid: &[f64],
    mode: ResidualMode,
    x0: &[f64],
    rng: &mut StreamRng,
) -> Result<SdePath> {
    SdeSimulator::new(model, nvm, eps, mode)?.run(grid, x0, rng)
}

/// [`simulate_sde`] with the sampler and residual rates built once.
#[derive(Debug, Clone)]
pub struct SdeSimulator {
    model: LinearSdeModel,
    nvm: NvmSpec,
    sampler: JumpSampler,
    rates: Option<ResidualMoments>,
    eps: f64,
}

impl SdeSimulator {
    pub fn new(model: &LinearSdeModel, nvm: &NvmSpec, eps: f64, mode: ResidualMode) -> Result<Self> {
        nvm.validate()?;
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(domain(format!("truncation level must be finite and > 0, got {eps}")));
        }
        let rates = match mode {
            ResidualMode::Gaussian => Some(residual_moments(nvm, eps, Tolerance::QUADRATURE)?),
            ResidualMode::None => None,
        };
        Ok(SdeSimulator { model: model.clone(), nvm: *nvm, sampler: JumpSampler::new(&nvm.subordinator)?, rates, eps })
    }

    pub fn run(&self, grid: &[f64], x0: &[f64], rng: &mut StreamRng) -> Result<SdePath> {
        let model = &self.model;
        let p = model.dim();
        if x0.len() != p {
            return Err(domain(format!("x0 has length {}, expected {p}", x0.len())));
        }
        if grid.first() != Some(&0.0) || grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(domain("grid must start at 0 and be strictly increasing"));
        }
        if *grid.last().unwrap() > model.horizon * (1.0 + 1e-12) {
            return Err(domain(format!("grid exceeds the horizon {}", model.horizon)));
        }
        let mut x = DVector::from_column_slice(x0);
        let mut states = vec![x0.to_vec()];
        let mut cache: Option<StepCache> = None;
        for w in grid.windows(2) {
            let dt = w[1] - w[0];
            if !cache.as_ref().is_some_and(|c| ((c.dt - dt) / dt).abs() < 1e-12) {
                let (mean, chol) = match &self.rates {
                    Some(r) => {
                        let (m, q) = scaled_moments(model, r, dt)?;
                        (m, jittered_cholesky(&q)?)
                    }
                    None => (DVector::zeros(p), DMatrix::zeros(p, p)),
                };
                cache = Some(StepCache { dt, flow: matrix_exp(&model.a, dt)?, mean, chol });
            }
            let c = cache.as_ref().unwrap();
            let jumps = self.sampler.sample(self.eps, dt, rng)?;
            let path = build_nvm_path(&self.nvm, &jumps, rng);
            x = &c.flow * x + propagate(model, path.events.into_iter(), dt)?;
            if self.rates.is_some() {
                let u = DVector::from_fn(p, |_, _| standard_normal(rng));
                x += &c.mean + &c.chol * u;
            }
            states.push(x.iter().copied().collect());
        }
        let residual_mode = if self.rates.is_some() { ResidualMode::Gaussian } else { ResidualMode::None };
        Ok(SdePath { grid: grid.to_vec(), states, residual_mode })
    }
}
