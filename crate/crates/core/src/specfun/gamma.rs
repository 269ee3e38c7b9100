use crate::error::{domain, Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;
const MAX_ITER: usize = 100_000;

pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

pub fn erf(x: f64) -> f64 {
    libm::erf(x)
}

pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

fn check(s: f64, x: f64) -> Result<()> {
    if !(s.is_finite() && x.is_finite()) {
        return Err(domain(format!("incomplete gamma needs finite arguments, got ({s}, {x})")));
    }
    if s <= 0.0 || x < 0.0 {
        return Err(domain(format!("incomplete gamma needs s > 0, x >= 0, got ({s}, {x})")));
    }
    Ok(())
}

/// γ(s, x) = ∫₀ˣ t^{s−1} e^{−t} dt.
pub fn lower_incomplete_gamma(s: f64, x: f64) -> Result<f64> {
    check(s, x)?;
    Ok(lower_gamma_unchecked(s, x))
}

/// Γ(s, x) = ∫ₓ^∞ t^{s−1} e^{−t} dt.
pub fn upper_incomplete_gamma(s: f64, x: f64) -> Result<f64> {
    check(s, x)?;
    Ok(upper_gamma_any(s, x))
}

pub(crate) fn lower_gamma_unchecked(s: f64, x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if x < s + 1.0 {
        lower_series(s, x)
    } else {
        gamma(s) - upper_cf(s, x)
    }
}

/// Γ(s, x) for any real s when x > 0, and for s > 0 when x = 0.
pub(crate) fn upper_gamma_any(s: f64, x: f64) -> f64 {
    if x == 0.0 {
        return gamma(s);
    }
    if s > 0.0 {
        return if x < s + 1.0 { gamma(s) - lower_series(s, x) } else { upper_cf(s, x) };
    }
    if x >= 1.0 {
        return upper_cf(s, x);
    }
    if s == 0.0 {
        return e1_series(x);
    }
    // Γ(s, x) = (Γ(s+1, x) − xˢe^{−x}) / s, stepping s up until it is positive
    // (or zero). Only reached for x < 1, where the subtraction is benign.
    let k = (-s).ceil() as i32;
    let mut g = upper_gamma_any(s + k as f64, x);
    for j in (0..k).rev() {
        let sj = s + j as f64;
        g = (g - (sj * x.ln() - x).exp()) / sj;
    }
    g
}

/// x^s e^{-x} Σ x^k / (s (s+1) ... (s+k)).
fn lower_series(s: f64, x: f64) -> f64 {
    let mut ap = s;
    let mut term = 1.0 / s;
    let mut sum = term;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * EPS {
            break;
        }
    }
    sum * (s * x.ln() - x).exp()
}

/// Modified Lentz evaluation of the Legendre continued fraction for Γ(s, x).
fn upper_cf(s: f64, x: f64) -> f64 {
    let mut b = x + 1.0 - s;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - s);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    (s * x.ln() - x).exp() * h
}

fn e1_series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..MAX_ITER {
        term *= -x / k as f64;
        let add = term / k as f64;
        sum += add;
        if add.abs() < EPS * sum.abs() {
            break;
        }
    }
    -EULER_GAMMA - x.ln() - sum
}

/// Exponential integral E₁(x) = ∫ₓ^∞ e^{−t}/t dt for x > 0.
pub fn exp_integral_e1(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("E1 needs finite x > 0, got {x}")));
    }
    Ok(if x < 1.0 { e1_series(x) } else { upper_cf(0.0, x) })
}
