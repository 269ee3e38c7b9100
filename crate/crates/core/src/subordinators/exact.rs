//! Exact marginal draws of Z(t), used to validate the truncated series.

use rand::Rng;
use rand_distr::{Distribution, Gamma as GammaDist, InverseGaussian};

use super::SubordinatorSpec;
use crate::error::{domain, Error, Result};
use crate::rng::{uniform_open0, StreamRng};

/// One draw of Z(t).
///
/// Supported: Gamma at any t; tempered stable with κ = 1/2 and γ > 0
/// (inverse Gaussian marginal); GIG at t = 1.
pub fn sample_exact_marginal(spec: &SubordinatorSpec, t: f64, rng: &mut StreamRng) -> Result<f64> {
    spec.validate()?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(domain(format!("time must be finite and > 0, got {t}")));
    }
    match *spec {
        SubordinatorSpec::Gamma { nu, .. } => {
            let d = GammaDist::new(nu * t, 1.0 / spec.beta()).map_err(|e| domain(e.to_string()))?;
            Ok(d.sample(rng))
        }
        SubordinatorSpec::TemperedStable { kappa, delta, gamma } => {
            if kappa != 0.5 {
                return Err(Error::Capability(format!(
                    "exact tempered stable marginal needs kappa = 1/2, got {kappa}"
                )));
            }
            if gamma == 0.0 {
                return Err(Error::Capability(
                    "exact tempered stable marginal needs gamma > 0".into(),
                ));
            }
            let mean = delta * t / gamma;
            let shape = (delta * t) * (delta * t);
            let d = InverseGaussian::new(mean, shape).map_err(|e| domain(e.to_string()))?;
            Ok(d.sample(rng))
        }
        SubordinatorSpec::Gig { lambda, delta, gamma } => {
            if t != 1.0 {
                return Err(Error::Capability(format!("exact GIG marginal needs t = 1, got {t}")));
            }
            Ok(GigVariate::new(lambda, delta, gamma)?.sample(rng))
        }
    }
}

/// GIG(λ, δ, γ) variates, density ∝ x^{λ−1} exp(−(δ²/x + γ²x)/2), by the
/// ratio-of-uniforms method with mode shift on the standardised law
/// ∝ y^{|λ|−1} exp(−ω(y + 1/y)/2), ω = δγ. Then x = (δ/γ) y, inverted when
/// λ < 0.
#[derive(Debug, Clone)]
pub struct GigVariate {
    lambda: f64,
    omega: f64,
    scale: f64,
    mode: f64,
    log_f_mode: f64,
    u_max: f64,
    v_min: f64,
    v_max: f64,
}

impl GigVariate {
    pub fn new(lambda: f64, delta: f64, gamma: f64) -> Result<Self> {
        if !(lambda.is_finite() && delta > 0.0 && gamma > 0.0 && delta.is_finite() && gamma.is_finite()) {
            return Err(domain(format!("GIG needs finite lambda, delta > 0, gamma > 0; got ({lambda}, {delta}, {gamma})")));
        }
        let l = lambda.abs();
        let omega = delta * gamma;
        let mode = ((l - 1.0) + ((l - 1.0).powi(2) + omega * omega).sqrt()) / omega;
        let log_f = |y: f64| (l - 1.0) * y.ln() - 0.5 * omega * (y + 1.0 / y);
        let log_f_mode = log_f(mode);

        // extrema of (y − m)√f(y) solve y³ + a y² + b y + c = 0
        let a = -2.0 * (l + 1.0) / omega - mode;
        let b = 2.0 * (l - 1.0) * mode / omega - 1.0;
        let c = mode;
        let p = b - a * a / 3.0;
        let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
        let phi = (-0.5 * q * (-27.0 / (p * p * p)).sqrt()).clamp(-1.0, 1.0).acos();
        let r = (-4.0 * p / 3.0).sqrt();
        let y_plus = r * (phi / 3.0).cos() - a / 3.0;
        let y_minus = r * (phi / 3.0 + 4.0 * std::f64::consts::PI / 3.0).cos() - a / 3.0;
        let shifted = |y: f64| (y - mode) * (0.5 * (log_f(y) - log_f_mode)).exp();
        Ok(GigVariate {
            lambda,
            omega,
            scale: delta / gamma,
            mode,
            log_f_mode,
            u_max: 1.0,
            v_min: shifted(y_minus),
            v_max: shifted(y_plus),
        })
    }

    pub fn sample(&self, rng: &mut StreamRng) -> f64 {
        let l = self.lambda.abs();
        let y = loop {
            let u = self.u_max * uniform_open0(rng);
            let v = self.v_min + (self.v_max - self.v_min) * rng.random::<f64>();
            let y = v / u + self.mode;
            if y <= 0.0 {
                continue;
            }
            let log_ratio = (l - 1.0) * y.ln() - 0.5 * self.omega * (y + 1.0 / y) - self.log_f_mode;
            if 2.0 * u.ln() <= log_ratio {
                break y;
            }
        };
        if self.lambda < 0.0 {
            self.scale / y
        } else {
            self.scale * y
        }
    }
}
