//! Scalar special functions behind the Lévy densities, truncated moments and
//! Kolmogorov bounds.

mod bessel;
mod gamma;
mod jaeger;
mod kummer;
pub mod quad;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use bessel::{bessel_jy, hankel_modulus_sq, MAX_ORDER};
pub(crate) use bessel::modulus_sq_unchecked as bessel_modulus_sq_fast;
pub use gamma::{
    erf, erfc, exp_integral_e1, gamma, ln_gamma, lower_incomplete_gamma, upper_incomplete_gamma,
};
#[allow(unused_imports)]
pub(crate) use gamma::{lower_gamma_unchecked, upper_gamma_any};
pub use jaeger::{hankel_weighted_integral, jaeger_integral};
pub use kummer::kummer_phi;

/// Stopping rule for series, continued fractions and adaptive quadrature.
/// `max_terms` caps series terms or quadrature subdivisions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64, max_terms: usize) -> Result<Self> {
        let ok = abs_tol >= 0.0
            && rel_tol >= 0.0
            && (abs_tol > 0.0 || rel_tol > 0.0)
            && max_terms >= 1
            && abs_tol.is_finite()
            && rel_tol.is_finite();
        if ok {
            Ok(Tolerance { abs_tol, rel_tol, max_terms })
        } else {
            Err(Error::Config(format!(
                "tolerance needs abs_tol, rel_tol >= 0 (not both zero) and max_terms >= 1, got \
                 ({abs_tol}, {rel_tol}, {max_terms})"
            )))
        }
    }

    /// Gammas, erf and the Kummer series.
    pub const SERIES: Tolerance = Tolerance { abs_tol: 0.0, rel_tol: 1e-10, max_terms: 10_000 };

    /// Hankel-weighted quadrature (Jaeger integral, GIG moments and tails).
    pub const QUADRATURE: Tolerance = Tolerance { abs_tol: 0.0, rel_tol: 1e-8, max_terms: 2_000 };

    pub(crate) fn met(&self, err: f64, value: f64) -> bool {
        err <= self.abs_tol.max(self.rel_tol * value.abs())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::QUADRATURE
    }
}
