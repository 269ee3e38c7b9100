//! Shot-noise series for subordinator jumps.
//!
//! Every family is simulated by thinning a dominating Lévy measure whose tail
//! inverts in closed form. Epochs Γᵢ are partial sums of unit exponentials and
//! candidates h(Γᵢ/T) are nonincreasing, so the truncation "stop once the
//! candidate falls below ε" is exact. A band [lo, hi) starts the epochs at
//! T·tail(hi), which is exact by memorylessness.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;
use rand_distr::{Distribution, Gamma as GammaDist};
use serde::{Deserialize, Serialize};

use super::{default_z0, gig_h0, ts_scale, SubordinatorSpec};
use crate::error::{domain, Error, Result};
use crate::rng::{exponential, standard_normal, StreamRng};
use crate::specfun::gamma;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Jump {
    pub v: f64,
    pub z: f64,
}

/// Jumps of size >= ε over (0, T], sorted by decreasing size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpSeries {
    pub horizon: f64,
    pub epsilon: f64,
    pub jumps: Vec<Jump>,
}

impl JumpSeries {
    pub fn total(&self) -> f64 {
        self.jumps.iter().map(|j| j.z).sum()
    }

    /// Σ Zᵢ 1(Vᵢ <= t).
    pub fn value_at(&self, t: f64) -> f64 {
        self.jumps.iter().filter(|j| j.v <= t).map(|j| j.z).sum()
    }
}

/// Dominating measure with closed-form tail and inverse tail.
#[derive(Debug, Clone, Copy)]
enum Envelope {
    /// c z^{−1−κ}
    Power { c: f64, kappa: f64 },
    /// ν / (z (1 + βz)), tail ν ln(1 + 1/(βz))
    GammaLike { nu: f64, beta: f64 },
}

impl Envelope {
    fn tail(&self, z: f64) -> f64 {
        if z.is_infinite() {
            return 0.0;
        }
        match *self {
            Envelope::Power { c, kappa } => c * z.powf(-kappa) / kappa,
            Envelope::GammaLike { nu, beta } => nu * (1.0 / (beta * z)).ln_1p(),
        }
    }

    fn inverse(&self, g: f64) -> f64 {
        match *self {
            Envelope::Power { c, kappa } => {
                let r = c / (kappa * g);
                if kappa == 0.5 {
                    r * r
                } else {
                    r.powf(1.0 / kappa)
                }
            }
            Envelope::GammaLike { nu, beta } => 1.0 / (beta * (g / nu).exp_m1()),
        }
    }
}

#[derive(Debug, Clone)]
enum Thinning {
    /// (1 + βz) e^{−βz}
    Gamma { beta: f64 },
    /// e^{−βz}
    Tempered { beta: f64 },
    /// e^{−βz}, then y ~ |N(0, δ²/z)| restricted to y >= y_min, accepted with
    /// probability `scale` / (y |H_ν(y)|²).
    GigHalfNormal { beta: f64, delta: f64, nu: f64, y_min: f64, scale: f64 },
    /// e^{−βz}, then y² = 2δ²G/z with G ~ Gamma(ν, 1) restricted to y < z₀,
    /// accepted with probability H₀ (y/z₀)^{1−2ν} / (y |H_ν(y)|²).
    GigPowerLaw { beta: f64, delta: f64, nu: f64, z0: f64, h0: f64, shape: GammaDist<f64> },
}

#[derive(Debug, Clone)]
struct Component {
    envelope: Envelope,
    thinning: Thinning,
}

impl Component {
    #[inline]
    fn accept(&self, z: f64, rng: &mut StreamRng) -> bool {
        let u: f64 = rng.random();
        match self.thinning {
            Thinning::Gamma { beta } => {
                // (1 + x)e^{−x} >= 1 − x²/2 settles most small candidates
                let bz = beta * z;
                u < 1.0 - 0.5 * bz * bz || u < (1.0 + bz) * (-bz).exp()
            }
            Thinning::Tempered { beta } => below_exp_neg(u, beta * z),
            Thinning::GigHalfNormal { beta, delta, nu, y_min, scale } => {
                if !below_exp_neg(u, beta * z) {
                    return false;
                }
                let y = delta * standard_normal(rng).abs() / z.sqrt();
                if y < y_min {
                    return false;
                }
                let u2: f64 = rng.random();
                // below order 1/2, y|H|² <= 2/π, so p >= scale·π/2
                if nu < 0.5 && u2 < scale * FRAC_PI_2 {
                    return true;
                }
                let p = scale / (y * modulus_sq(nu, y));
                debug_assert!(p <= 1.0 + 1e-9, "GIG acceptance {p} > 1 at y = {y}");
                u2 < p
            }
            Thinning::GigPowerLaw { beta, delta, nu, z0, h0, ref shape } => {
                if !below_exp_neg(u, beta * z) {
                    return false;
                }
                let g = shape.sample(rng);
                let y = (2.0 * delta * delta * g / z).sqrt();
                if y >= z0 || y == 0.0 {
                    return false;
                }
                let p = h0 * (y / z0).powf(1.0 - 2.0 * nu) / (y * modulus_sq(nu, y));
                debug_assert!(p <= 1.0 + 1e-9, "GIG acceptance {p} > 1 at y = {y}");
                rng.random::<f64>() < p
            }
        }
    }

    /// Visits accepted jump sizes in [lo, hi) over horizon T in decreasing order.
    #[inline]
    fn for_each<F: FnMut(f64, &mut StreamRng)>(
        &self,
        lo: f64,
        hi: f64,
        horizon: f64,
        rng: &mut StreamRng,
        mut visit: F,
    ) {
        let mut epoch = horizon * self.envelope.tail(hi);
        loop {
            epoch += exponential(rng);
            let z = self.envelope.inverse(epoch / horizon);
            if !(z >= lo) {
                break;
            }
            if z < hi && self.accept(z, rng) {
                visit(z, rng);
            }
        }
    }
}

/// u < e^{−x}, skipping the exponential when u < 1 − x already decides it.
#[inline]
fn below_exp_neg(u: f64, x: f64) -> bool {
    u < 1.0 - x || u < (-x).exp()
}

#[inline]
fn modulus_sq(nu: f64, y: f64) -> f64 {
    crate::specfun::bessel_modulus_sq_fast(nu, y)
}

/// Thinned shot-noise sampler for one subordinator.
#[derive(Debug, Clone)]
pub struct JumpSampler {
    spec: SubordinatorSpec,
    components: Vec<Component>,
}

impl JumpSampler {
    pub fn new(spec: &SubordinatorSpec) -> Result<Self> {
        Self::with_z0(spec, None)
    }

    /// As [`JumpSampler::new`], with an explicit z₀ for the GIG envelope.
    pub fn with_z0(spec: &SubordinatorSpec, z0: Option<f64>) -> Result<Self> {
        spec.validate()?;
        let beta = spec.beta();
        let components = match *spec {
            SubordinatorSpec::Gamma { nu, .. } => vec![Component {
                envelope: Envelope::GammaLike { nu, beta },
                thinning: Thinning::Gamma { beta },
            }],
            SubordinatorSpec::TemperedStable { kappa, delta, .. } => vec![Component {
                envelope: Envelope::Power { c: ts_scale(kappa, delta), kappa },
                thinning: Thinning::Tempered { beta },
            }],
            SubordinatorSpec::Gig { lambda, delta, .. } => gig_components(lambda, delta, beta, z0)?,
        };
        Ok(JumpSampler { spec: *spec, components })
    }

    pub fn spec(&self) -> &SubordinatorSpec {
        &self.spec
    }

    /// Jumps of size >= ε over (0, T].
    pub fn sample(&self, eps: f64, horizon: f64, rng: &mut StreamRng) -> Result<JumpSeries> {
        check_band(eps, f64::INFINITY, horizon)?;
        let mut jumps = Vec::new();
        for comp in &self.components {
            comp.for_each(eps, f64::INFINITY, horizon, rng, |z, rng| {
                let v = horizon * (1.0 - rng.random::<f64>());
                jumps.push(Jump { v, z });
            });
        }
        if self.components.len() > 1 {
            jumps.sort_by(|a, b| b.z.total_cmp(&a.z));
        }
        Ok(JumpSeries { horizon, epsilon: eps, jumps })
    }

    /// Sum and count of the jumps with sizes in [lo, hi) over (0, T], without
    /// materialising them.
    pub fn band_sum(&self, lo: f64, hi: f64, horizon: f64, rng: &mut StreamRng) -> Result<(f64, usize)> {
        check_band(lo, hi, horizon)?;
        let mut sum = 0.0;
        let mut count = 0;
        for comp in &self.components {
            comp.for_each(lo, hi, horizon, rng, |z, _| {
                sum += z;
                count += 1;
            });
        }
        Ok((sum, count))
    }

    /// Visits every jump with size in [lo, hi) over (0, T] as (v, z), grouped
    /// by envelope component and decreasing in z within each component.
    pub fn for_each_jump<F: FnMut(f64, f64, &mut StreamRng)>(
        &self,
        lo: f64,
        hi: f64,
        horizon: f64,
        rng: &mut StreamRng,
        mut visit: F,
    ) -> Result<()> {
        check_band(lo, hi, horizon)?;
        for comp in &self.components {
            comp.for_each(lo, hi, horizon, rng, |z, rng| {
                let v = horizon * (1.0 - rng.random::<f64>());
                visit(v, z, rng);
            });
        }
        Ok(())
    }
}

fn check_band(lo: f64, hi: f64, horizon: f64) -> Result<()> {
    if !(lo > 0.0 && lo.is_finite()) {
        return Err(domain(format!("truncation level must be finite and > 0, got {lo}")));
    }
    if !(hi > lo) {
        return Err(domain(format!("band upper edge {hi} must exceed lower edge {lo}")));
    }
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(domain(format!("horizon must be finite and > 0, got {horizon}")));
    }
    Ok(())
}

/// Envelope for the GIG Lévy density in the joint (z, y) representation
/// Q(z) = z⁻¹e^{−βz}[max(0,λ) + (2/π²)∫ e^{−zy²/2δ²} w(y) dy], where
/// w(y) = 1/(y|H_ν(y)|²). The Gamma part is simulated exactly; the integral
/// part is thinned against bounds on w:
/// ν >= 1/2: w <= π/2 everywhere;
/// ν < 1/2: w <= 1/H₀ on y >= z₀ and w <= (1/H₀)(y/z₀)^{2ν−1} on y < z₀.
fn gig_components(lambda: f64, delta: f64, beta: f64, z0: Option<f64>) -> Result<Vec<Component>> {
    let nu = lambda.abs();
    if nu == 0.0 {
        return Err(Error::Capability(
            "GIG jump sampling needs lambda != 0 (the small-y envelope degenerates at order 0)".into(),
        ));
    }
    let mut comps = Vec::new();
    if lambda > 0.0 {
        comps.push(Component {
            envelope: Envelope::GammaLike { nu: lambda, beta },
            thinning: Thinning::Gamma { beta },
        });
    }
    if nu >= 0.5 {
        comps.push(Component {
            envelope: Envelope::Power { c: delta / (2.0 * PI).sqrt(), kappa: 0.5 },
            thinning: Thinning::GigHalfNormal { beta, delta, nu, y_min: 0.0, scale: 2.0 / PI },
        });
        return Ok(comps);
    }
    let z0 = z0.unwrap_or_else(|| default_z0(lambda));
    let h0 = gig_h0(lambda, z0)?;
    comps.push(Component {
        envelope: Envelope::Power {
            c: delta * 2f64.sqrt() / (PI.powf(1.5) * h0),
            kappa: 0.5,
        },
        thinning: Thinning::GigHalfNormal { beta, delta, nu, y_min: z0, scale: h0 },
    });
    let c = z0.powf(1.0 - 2.0 * nu) * (2.0 * delta * delta).powf(nu) * gamma(nu) / (PI * PI * h0);
    let shape = GammaDist::new(nu, 1.0).map_err(|e| domain(format!("GIG envelope: {e}")))?;
    comps.push(Component {
        envelope: Envelope::Power { c, kappa: nu },
        thinning: Thinning::GigPowerLaw { beta, delta, nu, z0, h0, shape },
    });
    Ok(comps)
}

/// Jumps of size >= ε of the subordinator over (0, T].
pub fn sample_jumps(
    spec: &SubordinatorSpec,
    eps: f64,
    horizon: f64,
    rng: &mut StreamRng,
) -> Result<JumpSeries> {
    JumpSampler::new(spec)?.sample(eps, horizon, rng)
}
