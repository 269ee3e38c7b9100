use super::Tolerance;
use crate::error::{domain, Error, Result};

/// Confluent hypergeometric Φ(a, b; z) = Σ a⁽ⁿ⁾zⁿ / (b⁽ⁿ⁾ n!), summed directly
/// with Neumaier compensation. Intended for moderate |z|.
pub fn kummer_phi(a: f64, b: f64, z: f64, tol: Tolerance) -> Result<f64> {
    if !(a.is_finite() && b.is_finite() && z.is_finite()) {
        return Err(domain(format!("kummer_phi needs finite arguments, got ({a}, {b}, {z})")));
    }
    if b <= 0.0 && b.fract() == 0.0 {
        return Err(domain(format!("kummer_phi: b = {b} is a non-positive integer")));
    }
    let mut sum = 1.0;
    let mut comp = 0.0;
    let mut term = 1.0;
    for n in 0..tol.max_terms {
        let nf = n as f64;
        term *= (a + nf) * z / ((b + nf) * (nf + 1.0));
        let t = sum + term;
        comp += if sum.abs() >= term.abs() { (sum - t) + term } else { (term - t) + sum };
        sum = t;
        // terms only shrink for good once n has passed |z|
        if term == 0.0 || (nf + 1.0 > z.abs() && tol.met(term.abs(), sum + comp)) {
            return Ok(sum + comp);
        }
    }
    Err(Error::Numeric { what: "Kummer series", estimate: sum + comp, error: term.abs() })
}
