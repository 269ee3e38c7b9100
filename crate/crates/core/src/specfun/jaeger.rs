//! Integrals against the Hankel weight w(x) = 1 / (x |H_ν(x)|²).
//!
//! x|H_ν(x)|² tends to 2/π at infinity, so w → π/2 there. Near zero w behaves
//! like a power x^{2ν−1} (or a log form at ν = 0) and is integrated in closed
//! form below X_SMALL. The range [X_SMALL, 1] is mapped by x = e^{−u} and
//! [1, ∞) by x = 1/t before adaptive quadrature.

use std::f64::consts::{FRAC_PI_2, PI};

use super::bessel::{modulus_sq_unchecked, MAX_ORDER};
use super::quad::{integrate, Estimate};
use super::{gamma, Tolerance};
use crate::error::{domain, Error, Result};

const X_SMALL: f64 = 1e-8;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[inline]
fn weight(nu: f64, x: f64) -> f64 {
    1.0 / (x * modulus_sq_unchecked(nu, x))
}

/// ∫₀^{xs} w(x) dx from the small-argument forms of J_{±ν} and Y_ν.
fn weight_head(nu: f64, xs: f64) -> f64 {
    if nu == 0.0 {
        let t = (2.0 / PI) * ((0.5 * xs).ln() + EULER_GAMMA);
        return FRAC_PI_2 * (-1.0 / t).atan();
    }
    if nu >= 1.0 {
        let g = gamma(nu);
        return PI * PI * (0.5 * xs).powf(2.0 * nu) / (2.0 * nu * g * g);
    }
    let p = 1.0 / gamma(1.0 + nu);
    let q = 1.0 / gamma(1.0 - nu);
    let (s, c) = (nu * PI).sin_cos();
    let y = (0.5 * xs).powf(2.0 * nu);
    s / (2.0 * nu * p * q) * (p * y * s).atan2(q - c * p * y)
}

/// ∫₀^∞ g(x) (w(x) − shift) dx. `scale` sets the absolute error floor.
fn shifted_integral<G: Fn(f64) -> f64>(
    nu: f64,
    g: &G,
    shift: f64,
    scale: f64,
    tol: Tolerance,
) -> Result<Estimate> {
    let region = Tolerance { abs_tol: tol.abs_tol.max(tol.rel_tol * scale) / 3.0, ..tol };
    let head = g(X_SMALL) * (weight_head(nu, X_SMALL) - shift * X_SMALL);
    let u_max = -X_SMALL.ln();
    let mid = integrate(
        |u: f64| {
            let x = (-u).exp();
            g(x) * (weight(nu, x) - shift) * x
        },
        0.0,
        u_max,
        region,
    );
    let tail = integrate(
        |t: f64| {
            if t == 0.0 {
                return 0.0;
            }
            let x = 1.0 / t;
            g(x) * (weight(nu, x) - shift) / (t * t)
        },
        0.0,
        1.0,
        region,
    );
    match (mid, tail) {
        (Ok(m), Ok(t)) => Ok(Estimate { value: head + m.value + t.value, error: m.error + t.error }),
        (m, t) => {
            let pick = |r: &Result<Estimate>| match r {
                Ok(e) => (e.value, e.error),
                Err(Error::Numeric { estimate, error, .. }) => (*estimate, *error),
                Err(_) => (f64::NAN, f64::INFINITY),
            };
            let (mv, me) = pick(&m);
            let (tv, te) = pick(&t);
            Err(Error::Numeric {
                what: "Hankel-weighted quadrature",
                estimate: head + mv + tv,
                error: me + te,
            })
        }
    }
}

fn check_order(nu: f64) -> Result<()> {
    if !nu.is_finite() || nu > MAX_ORDER {
        return Err(Error::UnsupportedOrder { nu });
    }
    Ok(())
}

/// ∫₀^∞ g(x) / (x |H_ν(x)|²) dx for g bounded near 0 and integrable against
/// the weight at infinity (w → π/2 there).
pub fn hankel_weighted_integral<G: Fn(f64) -> f64>(nu: f64, g: G, tol: Tolerance) -> Result<f64> {
    let nu = nu.abs();
    check_order(nu)?;
    shifted_integral(nu, &g, 0.0, 0.0, tol).map(|e| e.value)
}

/// J(z) = ∫₀^∞ exp(−x²z/(2δ²)) / (x |H_{|λ|}(x)|²) dx.
///
/// Evaluated as δ(π/2)^{3/2} z^{−1/2} plus the integral of the Gaussian
/// against w − π/2, which has a fixed sign: nonnegative for |λ| ≤ 1/2,
/// nonpositive above. The sign carries over to the result exactly.
pub fn jaeger_integral(z: f64, lambda: f64, delta: f64, tol: Tolerance) -> Result<f64> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(domain(format!("Jaeger integral needs finite z > 0, got {z}")));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(domain(format!("Jaeger integral needs finite delta > 0, got {delta}")));
    }
    let nu = lambda.abs();
    check_order(nu)?;
    let lead = delta * FRAC_PI_2.powf(1.5) / z.sqrt();
    if nu == 0.5 {
        return Ok(lead);
    }
    let a = z / (2.0 * delta * delta);
    let g = |x: f64| (-a * x * x).exp();
    let rest = shifted_integral(nu, &g, FRAC_PI_2, lead, tol)?;
    Ok(if nu < 0.5 { lead + rest.value.max(0.0) } else { lead + rest.value.min(0.0) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn head_matches_quadrature_of_weight() {
        let tol = Tolerance::new(0.0, 1e-12, 2000).unwrap();
        for &nu in &[0.0, 0.2, 0.7, 1.0, 2.5] {
            let lo = X_SMALL * 1e-2;
            let direct = integrate(|x| weight(nu, x), lo, X_SMALL, tol).unwrap().value;
            let formula = weight_head(nu, X_SMALL) - weight_head(nu, lo);
            assert!((formula - direct).abs() <= 1e-8 * direct, "nu={nu}: {formula} vs {direct}");
        }
    }
}
