//! Gamma, tempered stable and GIG subordinators: Lévy densities, tail masses,
//! truncated moments, shot-noise jump samplers and exact marginal samplers.

mod exact;
mod series;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::specfun::{
    exp_integral_e1, gamma, hankel_modulus_sq, hankel_weighted_integral, jaeger_integral,
    lower_gamma_unchecked, upper_gamma_any, Tolerance, MAX_ORDER,
};

pub use exact::{sample_exact_marginal, GigVariate};
pub use series::{sample_jumps, Jump, JumpSampler, JumpSeries};

/// Driftless subordinator, identified by its Lévy density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SubordinatorSpec {
    /// ν z⁻¹ exp(−γ²z/2)
    Gamma { nu: f64, gamma: f64 },
    /// A z^{−1−κ} exp(−γ^{1/κ} z/2), A = δκ2^κ/Γ(1−κ)
    TemperedStable { kappa: f64, delta: f64, gamma: f64 },
    /// z⁻¹ exp(−γ²z/2) [max(0, λ) + (2/π²) J(z)]
    Gig { lambda: f64, delta: f64, gamma: f64 },
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{name} must be finite and > 0, got {x}")))
    }
}

impl SubordinatorSpec {
    pub fn gamma(nu: f64, gamma: f64) -> Result<Self> {
        let s = SubordinatorSpec::Gamma { nu, gamma };
        s.validate()?;
        Ok(s)
    }

    pub fn tempered_stable(kappa: f64, delta: f64, gamma: f64) -> Result<Self> {
        let s = SubordinatorSpec::TemperedStable { kappa, delta, gamma };
        s.validate()?;
        Ok(s)
    }

    pub fn gig(lambda: f64, delta: f64, gamma: f64) -> Result<Self> {
        let s = SubordinatorSpec::Gig { lambda, delta, gamma };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            SubordinatorSpec::Gamma { nu, gamma } => {
                positive("nu", nu)?;
                positive("gamma", gamma)
            }
            SubordinatorSpec::TemperedStable { kappa, delta, gamma } => {
                if !(kappa > 0.0 && kappa < 1.0) {
                    return Err(domain(format!("kappa must lie in (0, 1), got {kappa}")));
                }
                positive("delta", delta)?;
                if !(gamma >= 0.0 && gamma.is_finite()) {
                    return Err(domain(format!("gamma must be finite and >= 0, got {gamma}")));
                }
                Ok(())
            }
            SubordinatorSpec::Gig { lambda, delta, gamma } => {
                if !lambda.is_finite() {
                    return Err(domain(format!("lambda must be finite, got {lambda}")));
                }
                if lambda.abs() > MAX_ORDER {
                    return Err(Error::UnsupportedOrder { nu: lambda.abs() });
                }
                positive("delta", delta)?;
                positive("gamma", gamma)
            }
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            SubordinatorSpec::Gamma { .. } => "gamma",
            SubordinatorSpec::TemperedStable { .. } => "tempered_stable",
            SubordinatorSpec::Gig { .. } => "gig",
        }
    }

    /// Exponential tempering rate β in exp(−βz).
    pub fn beta(&self) -> f64 {
        match *self {
            SubordinatorSpec::Gamma { gamma, .. } | SubordinatorSpec::Gig { gamma, .. } => {
                0.5 * gamma * gamma
            }
            SubordinatorSpec::TemperedStable { kappa, gamma, .. } => 0.5 * gamma.powf(1.0 / kappa),
        }
    }

    /// TS scale A = δκ2^κ/Γ(1−κ); `None` for other families.
    pub fn ts_scale(&self) -> Option<f64> {
        match *self {
            SubordinatorSpec::TemperedStable { kappa, delta, .. } => {
                Some(ts_scale(kappa, delta))
            }
            _ => None,
        }
    }
}

pub(crate) fn ts_scale(kappa: f64, delta: f64) -> f64 {
    delta * kappa * 2f64.powf(kappa) / gamma(1.0 - kappa)
}

/// Default z₀ for the GIG envelope and bounds at order ν = |λ|:
/// (2^{1−2ν}π/Γ(ν)²)^{1/(1−2ν)}, or 1 at ν = 1/2 (and at ν = 0, where the
/// formula degenerates).
pub fn default_z0(lambda: f64) -> f64 {
    let nu = lambda.abs();
    if nu == 0.5 || nu == 0.0 {
        return 1.0;
    }
    let g = gamma(nu);
    (2f64.powf(1.0 - 2.0 * nu) * PI / (g * g)).powf(1.0 / (1.0 - 2.0 * nu))
}

/// H₀ = z₀ |H_{|λ|}(z₀)|².
pub fn gig_h0(lambda: f64, z0: f64) -> Result<f64> {
    positive("z0", z0)?;
    Ok(z0 * hankel_modulus_sq(lambda.abs(), z0)?)
}

fn check_jump(z: f64) -> Result<()> {
    if z > 0.0 && z.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("jump size must be finite and > 0, got {z}")))
    }
}

/// Q_Z(z).
pub fn levy_density(spec: &SubordinatorSpec, z: f64) -> Result<f64> {
    spec.validate()?;
    check_jump(z)?;
    let beta = spec.beta();
    Ok(match *spec {
        SubordinatorSpec::Gamma { nu, .. } => nu * (-beta * z).exp() / z,
        SubordinatorSpec::TemperedStable { kappa, delta, .. } => {
            ts_scale(kappa, delta) * z.powf(-1.0 - kappa) * (-beta * z).exp()
        }
        SubordinatorSpec::Gig { lambda, delta, .. } => {
            let j = jaeger_integral(z, lambda, delta, Tolerance::QUADRATURE)?;
            (-beta * z).exp() / z * (lambda.max(0.0) + 2.0 / (PI * PI) * j)
        }
    })
}

/// ε·Q_Z(ε); stays bounded as ε → 0 only for the Gamma family.
pub fn epsilon_qz(spec: &SubordinatorSpec, eps: f64) -> Result<f64> {
    Ok(eps * levy_density(spec, eps)?)
}

/// Q_Z([z, ∞)).
pub fn tail_mass(spec: &SubordinatorSpec, z: f64, tol: Tolerance) -> Result<f64> {
    spec.validate()?;
    check_jump(z)?;
    let beta = spec.beta();
    match *spec {
        SubordinatorSpec::Gamma { nu, .. } => Ok(nu * exp_integral_e1(beta * z)?),
        SubordinatorSpec::TemperedStable { kappa, delta, .. } => {
            let a = ts_scale(kappa, delta);
            Ok(if beta == 0.0 {
                a * z.powf(-kappa) / kappa
            } else {
                a * beta.powf(kappa) * upper_gamma_any(-kappa, beta * z)
            })
        }
        SubordinatorSpec::Gig { lambda, delta, .. } => {
            // swap the order: ∫ w(y) E₁(z (β + y²/2δ²)) dy
            let k = 0.5 / (delta * delta);
            let inner = hankel_weighted_integral(
                lambda,
                |y| e1_unchecked(z * (beta + k * y * y)),
                tol,
            )?;
            let gamma_part = if lambda > 0.0 { lambda * exp_integral_e1(beta * z)? } else { 0.0 };
            Ok(gamma_part + 2.0 / (PI * PI) * inner)
        }
    }
}

fn e1_unchecked(x: f64) -> f64 {
    if x > 700.0 {
        0.0
    } else {
        exp_integral_e1(x).unwrap_or(f64::NAN)
    }
}

/// ∫₀^x t^{s−1} e^{−ct} dt = γ(s, cx)/c^s, with the c → 0 limit.
fn scaled_lower_gamma(s: f64, c: f64, x: f64) -> f64 {
    if c == 0.0 {
        x.powf(s) / s
    } else {
        lower_gamma_unchecked(s, c * x) / c.powf(s)
    }
}

/// M^{(n)} = ∫₀^ε zⁿ Q_Z(dz) for real n >= 1.
pub fn truncated_moment(spec: &SubordinatorSpec, n: f64, eps: f64, tol: Tolerance) -> Result<f64> {
    spec.validate()?;
    if !(n >= 1.0 && n.is_finite()) {
        return Err(domain(format!("moment order must be finite and >= 1, got {n}")));
    }
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(domain(format!("truncation level must be finite and >= 0, got {eps}")));
    }
    if eps == 0.0 {
        return Ok(0.0);
    }
    let beta = spec.beta();
    match *spec {
        SubordinatorSpec::Gamma { nu, .. } => Ok(nu * scaled_lower_gamma(n, beta, eps)),
        SubordinatorSpec::TemperedStable { kappa, delta, .. } => {
            Ok(ts_scale(kappa, delta) * scaled_lower_gamma(n - kappa, beta, eps))
        }
        SubordinatorSpec::Gig { lambda, delta, .. } => {
            let k = 0.5 / (delta * delta);
            let inner = hankel_weighted_integral(
                lambda,
                |y| scaled_lower_gamma(n, beta + k * y * y, eps),
                tol,
            )?;
            let gamma_part = if lambda > 0.0 { lambda * scaled_lower_gamma(n, beta, eps) } else { 0.0 };
            Ok(gamma_part + 2.0 / (PI * PI) * inner)
        }
    }
}
