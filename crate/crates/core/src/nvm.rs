//! Normal variance-mean processes X(t) = μ_W Z(t) + σ_W B(Z(t)) from
//! subordinator jumps, plus the small-jump residual and its Gaussian proxy.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::rng::{standard_normal, StreamRng};
use crate::specfun::Tolerance;
use crate::subordinators::{truncated_moment, JumpSampler, JumpSeries, SubordinatorSpec};

/// Default ratio ε_floor/ε for residual simulation.
pub const DEFAULT_FLOOR_RATIO: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NvmSpec {
    pub subordinator: SubordinatorSpec,
    pub mu_w: f64,
    pub sigma_w: f64,
}

impl NvmSpec {
    pub fn new(subordinator: SubordinatorSpec, mu_w: f64, sigma_w: f64) -> Result<Self> {
        let s = NvmSpec { subordinator, mu_w, sigma_w };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        self.subordinator.validate()?;
        if !self.mu_w.is_finite() {
            return Err(domain(format!("mu_w must be finite, got {}", self.mu_w)));
        }
        if !(self.sigma_w > 0.0 && self.sigma_w.is_finite()) {
            return Err(domain(format!("sigma_w must be finite and > 0, got {}", self.sigma_w)));
        }
        Ok(())
    }

    /// Jump transform H(z, u) = μ_W z + σ_W √z u.
    #[inline]
    pub fn transform(&self, z: f64, u: f64) -> f64 {
        self.mu_w * z + self.sigma_w * z.sqrt() * u
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NvmEvent {
    pub v: f64,
    pub z: f64,
    pub x: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NvmPath {
    pub horizon: f64,
    pub epsilon: f64,
    pub events: Vec<NvmEvent>,
}

/// Attaches a Gaussian draw to every jump, in jump order: jump i consumes the
/// uniforms 2i and 2i+1 of `rng`.
pub fn build_nvm_path(nvm: &NvmSpec, jumps: &JumpSeries, rng: &mut StreamRng) -> NvmPath {
    let events = jumps
        .jumps
        .iter()
        .map(|j| NvmEvent { v: j.v, z: j.z, x: nvm.transform(j.z, standard_normal(rng)) })
        .collect();
    NvmPath { horizon: jumps.horizon, epsilon: jumps.epsilon, events }
}

/// Σ Xᵢ 1(Vᵢ <= t).
pub fn evaluate_path(path: &NvmPath, t: f64) -> Result<f64> {
    if !(0.0..=path.horizon).contains(&t) {
        return Err(domain(format!("t = {t} outside [0, {}]", path.horizon)));
    }
    Ok(path.events.iter().filter(|e| e.v <= t).map(|e| e.x).sum())
}

/// Per-unit-time mean and variance of the residual X_ε.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualMoments {
    pub mean_rate: f64,
    pub var_rate: f64,
}

pub fn residual_moments(nvm: &NvmSpec, eps: f64, tol: Tolerance) -> Result<ResidualMoments> {
    nvm.validate()?;
    if !(eps > 0.0) {
        return Err(domain(format!("truncation level must be > 0, got {eps}")));
    }
    let m1 = truncated_moment(&nvm.subordinator, 1.0, eps, tol)?;
    let m2 = if nvm.mu_w == 0.0 { 0.0 } else { truncated_moment(&nvm.subordinator, 2.0, eps, tol)? };
    Ok(ResidualMoments {
        mean_rate: nvm.mu_w * m1,
        var_rate: nvm.mu_w * nvm.mu_w * m2 + nvm.sigma_w * nvm.sigma_w * m1,
    })
}

/// Simulates the standardised residual Y_ε(t) = (X_ε(t) − E X_ε(t)) / σ_ε
/// from the jumps in [ε_floor, ε). Jumps below ε_floor are dropped; their
/// share of the variance is [`ResidualSampler::neglected_variance_fraction`].
///
/// Given the band sum S of subordinator jumps, the NVM residual is exactly
/// μ_W S + σ_W √S U with one standard normal U, so per-jump normals are not
/// drawn.
#[derive(Debug, Clone)]
pub struct ResidualSampler {
    nvm: NvmSpec,
    sampler: JumpSampler,
    eps: f64,
    floor: f64,
    moments: ResidualMoments,
    neglected: ResidualMoments,
}

impl ResidualSampler {
    pub fn new(nvm: &NvmSpec, eps: f64, floor: f64) -> Result<Self> {
        nvm.validate()?;
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(domain(format!("truncation level must be finite and > 0, got {eps}")));
        }
        if !(floor > 0.0 && floor < eps) {
            return Err(Error::Config(format!("residual floor must lie in (0, ε = {eps}), got {floor}")));
        }
        let tol = Tolerance::QUADRATURE;
        Ok(ResidualSampler {
            nvm: *nvm,
            sampler: JumpSampler::new(&nvm.subordinator)?,
            eps,
            floor,
            moments: residual_moments(nvm, eps, tol)?,
            neglected: residual_moments(nvm, floor, tol)?,
        })
    }

    pub fn with_default_floor(nvm: &NvmSpec, eps: f64) -> Result<Self> {
        Self::new(nvm, eps, eps * DEFAULT_FLOOR_RATIO)
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn moments(&self) -> ResidualMoments {
        self.moments
    }

    /// σ²_{ε_floor}/σ²_ε: expected variance of Y_ε(t)/t is one minus this.
    pub fn neglected_variance_fraction(&self) -> f64 {
        self.neglected.var_rate / self.moments.var_rate
    }

    /// Unstandardised residual over [0, t] from the band [ε_floor, ε).
    pub fn sample_raw(&self, t: f64, rng: &mut StreamRng) -> Result<f64> {
        let (s, _) = self.sampler.band_sum(self.floor, self.eps, t, rng)?;
        Ok(self.nvm.transform(s, standard_normal(rng)))
    }

    pub fn sample(&self, t: f64, rng: &mut StreamRng) -> Result<f64> {
        let x = self.sample_raw(t, rng)?;
        Ok((x - t * self.moments.mean_rate) / self.moments.var_rate.sqrt())
    }
}

/// N draws of Y_ε(t) at the default floor ε·1e−6.
pub fn standardised_residual_samples(
    nvm: &NvmSpec,
    eps: f64,
    t: f64,
    n: usize,
    rng: &mut StreamRng,
) -> Result<Vec<f64>> {
    let sampler = ResidualSampler::with_default_floor(nvm, eps)?;
    (0..n).map(|_| sampler.sample(t, rng)).collect()
}

/// Draw from Normal(mean_rate·Δt, var_rate·Δt).
pub fn gaussian_residual_increment(nvm: &NvmSpec, eps: f64, dt: f64, rng: &mut StreamRng) -> Result<f64> {
    let m = residual_moments(nvm, eps, Tolerance::QUADRATURE)?;
    residual_increment_from_moments(&m, dt, rng)
}

/// As [`gaussian_residual_increment`] with precomputed moments.
pub fn residual_increment_from_moments(moments: &ResidualMoments, dt: f64, rng: &mut StreamRng) -> Result<f64> {
    if !(dt > 0.0) {
        return Err(domain(format!("time step must be > 0, got {dt}")));
    }
    Ok(moments.mean_rate * dt + (moments.var_rate * dt).sqrt() * standard_normal(rng))
}
