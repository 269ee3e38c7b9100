//! Goodness-of-fit and moment diagnostics for Monte Carlo output.

use std::f64::consts::{PI, SQRT_2};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::rng::stream;
use crate::specfun::erfc;

pub const BOOTSTRAP_RESAMPLES: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub n: usize,
    /// Second sample size for the two-sample test.
    pub m: Option<usize>,
    pub p_value: f64,
}

pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// P(K > λ) for the Kolmogorov distribution.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        // small-λ form of the same theta series
        let mut s = 0.0;
        let c = PI * PI / (8.0 * lambda * lambda);
        for k in 1..=20 {
            let j = (2 * k - 1) as f64;
            s += (-j * j * c).exp();
        }
        return (1.0 - (2.0 * PI).sqrt() / lambda * s).clamp(0.0, 1.0);
    }
    let mut s = 0.0;
    let mut sign = 1.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        s += sign * term;
        if term < 1e-17 {
            break;
        }
        sign = -sign;
    }
    (2.0 * s).clamp(0.0, 1.0)
}

/// Asymptotic p-value with Stephens' small-sample scaling of √n.
fn ks_p_value(d: f64, n_eff: f64) -> f64 {
    let rn = n_eff.sqrt();
    kolmogorov_survival((rn + 0.12 + 0.11 / rn) * d)
}

fn sorted(x: &[f64]) -> Result<Vec<f64>> {
    if x.iter().any(|v| v.is_nan()) {
        return Err(domain("samples contain NaN"));
    }
    let mut v = x.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// One-sample KS test against a continuous CDF.
pub fn ks_one_sample<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<KsResult> {
    let n = samples.len();
    if n < 10 {
        return Err(domain(format!("KS test needs at least 10 samples, got {n}")));
    }
    let x = sorted(samples)?;
    let nf = n as f64;
    let mut d: f64 = 0.0;
    let mut prev = f64::NEG_INFINITY;
    for (i, &xi) in x.iter().enumerate() {
        let f = cdf(xi);
        if !(0.0..=1.0).contains(&f) || f < prev {
            return Err(domain(format!("cdf is not a distribution function: F({xi}) = {f}")));
        }
        prev = f;
        d = d.max(f - i as f64 / nf).max((i + 1) as f64 / nf - f);
    }
    Ok(KsResult { statistic: d, n, m: None, p_value: ks_p_value(d, nf) })
}

/// Two-sample KS test.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult> {
    let (n, m) = (a.len(), b.len());
    if n < 10 || m < 10 {
        return Err(domain(format!("KS test needs at least 10 samples each, got {n} and {m}")));
    }
    let x = sorted(a)?;
    let y = sorted(b)?;
    let (nf, mf) = (n as f64, m as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < n && j < m {
        let t = x[i].min(y[j]);
        while i < n && x[i] <= t {
            i += 1;
        }
        while j < m && y[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / nf - j as f64 / mf).abs());
    }
    Ok(KsResult { statistic: d, n, m: Some(m), p_value: ks_p_value(d, nf * mf / (nf + mf)) })
}

/// Linear-interpolation empirical quantile of sorted data.
fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = p * (sorted.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Matched empirical quantiles of `a` and `b` at levels (i − 0.5)/k.
pub fn qq_points(a: &[f64], b: &[f64], k: usize) -> Result<Vec<(f64, f64)>> {
    if k < 2 {
        return Err(domain(format!("Q-Q plot needs k >= 2 levels, got {k}")));
    }
    if a.is_empty() || b.is_empty() {
        return Err(domain("Q-Q plot needs non-empty samples"));
    }
    let x = sorted(a)?;
    let y = sorted(b)?;
    Ok((1..=k)
        .map(|i| {
            let p = (i as f64 - 0.5) / k as f64;
            (quantile(&x, p), quantile(&y, p))
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSummary {
    pub n: usize,
    pub mean: f64,
    /// Unbiased.
    pub variance: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
    pub se_mean: f64,
    pub se_variance: f64,
    pub se_skewness: f64,
    /// Bootstrap standard deviation of the excess kurtosis.
    pub se_kurtosis: f64,
    /// Bootstrap percentile 99% interval for the excess kurtosis.
    pub kurtosis_ci99: (f64, f64),
}

fn central(x: &[f64]) -> (f64, f64, f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &v in x {
        let d = v - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    (mean, m2 / n, m3 / n, m4 / n)
}

fn excess_kurtosis(m2: f64, m4: f64) -> f64 {
    m4 / (m2 * m2) - 3.0
}

/// Sample moments with plug-in standard errors and a bootstrap interval for
/// the kurtosis. `seed` feeds the bootstrap streams only.
pub fn moments(samples: &[f64], seed: u64) -> Result<MomentSummary> {
    let n = samples.len();
    if n < 20 {
        return Err(domain(format!("moment summary needs at least 20 samples, got {n}")));
    }
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(domain("samples must be finite"));
    }
    let nf = n as f64;
    let (mean, m2, m3, m4) = central(samples);
    let variance = m2 * nf / (nf - 1.0);
    let skewness = m3 / m2.powf(1.5);
    let kurt = excess_kurtosis(m2, m4);

    let mut boot: Vec<f64> = (0..BOOTSTRAP_RESAMPLES)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream(seed, b as u64);
            let resample: Vec<f64> = (0..n).map(|_| samples[rng.random_range(0..n)]).collect();
            let (_, r2, _, r4) = central(&resample);
            excess_kurtosis(r2, r4)
        })
        .collect();
    let bmean = boot.iter().sum::<f64>() / boot.len() as f64;
    let bsd = (boot.iter().map(|k| (k - bmean).powi(2)).sum::<f64>() / (boot.len() - 1) as f64).sqrt();
    boot.sort_by(f64::total_cmp);
    let ci = (quantile(&boot, 0.005), quantile(&boot, 0.995));

    Ok(MomentSummary {
        n,
        mean,
        variance,
        skewness,
        excess_kurtosis: kurt,
        se_mean: (variance / nf).sqrt(),
        se_variance: ((m4 - m2 * m2).max(0.0) / nf).sqrt(),
        se_skewness: (6.0 / nf).sqrt(),
        se_kurtosis: bsd,
        kurtosis_ci99: ci,
    })
}
