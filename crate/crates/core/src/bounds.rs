//! Gaussian-limit condition, necessity functionals, and Berry-Esseen type
//! Kolmogorov-distance bounds for the standardised residual.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::nvm::NvmSpec;
use crate::specfun::{erf, erfc, gamma, kummer_phi, lower_gamma_unchecked, Tolerance};
use crate::subordinators::{default_z0, gig_h0, truncated_moment, SubordinatorSpec};

/// Berry-Esseen constant used throughout.
pub const BERRY_ESSEEN: f64 = 0.7975;

/// C = 0.7975 · 2√(2/π).
pub fn general_constant() -> f64 {
    BERRY_ESSEEN * 2.0 * (2.0 / PI).sqrt()
}

/// Relative tolerance for a nonzero analytic limit to be reproduced at the
/// smallest ε of a trace.
pub const LIMIT_MATCH_TOL: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    GaussianLimit,
    NonGaussian,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::GaussianLimit => "gaussian_limit",
            Verdict::NonGaussian => "non_gaussian",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

impl std::str::FromStr for Verdict {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "gaussian_limit" => Ok(Verdict::GaussianLimit),
            "non_gaussian" => Ok(Verdict::NonGaussian),
            "inconclusive" => Ok(Verdict::Inconclusive),
            other => Err(format!("unknown verdict '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trend {
    Decreasing,
    Increasing,
    Stable,
}

/// Direction of the last step of a trace; "stable" below 1% relative change.
pub fn trend(values: &[f64]) -> Trend {
    match values {
        [.., a, b] => {
            let change = (b - a) / a.abs().max(f64::MIN_POSITIVE);
            if change.abs() < 0.01 {
                Trend::Stable
            } else if change < 0.0 {
                Trend::Decreasing
            } else {
                Trend::Increasing
            }
        }
        _ => Trend::Stable,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub family: String,
    /// lim M⁽²⁾/(M⁽¹⁾)² as ε → 0.
    pub analytic_limit: f64,
    /// (ε, M⁽²⁾/(M⁽¹⁾)²) along the grid.
    pub numeric_trace: Vec<(f64, f64)>,
    pub trend: Trend,
    pub verdict: Verdict,
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(domain("epsilon grid is empty"));
    }
    if grid.iter().any(|&e| !(e > 0.0 && e.is_finite())) {
        return Err(domain("epsilon grid must contain finite positive values"));
    }
    if grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(domain("epsilon grid must be strictly decreasing"));
    }
    Ok(())
}

pub fn analytic_condition_limit(spec: &SubordinatorSpec) -> f64 {
    match *spec {
        SubordinatorSpec::Gamma { nu, .. } => 1.0 / (2.0 * nu),
        SubordinatorSpec::TemperedStable { .. } | SubordinatorSpec::Gig { .. } => 0.0,
    }
}

/// Evaluates lim M⁽²⁾/(M⁽¹⁾)² analytically and along a decreasing ε-grid.
///
/// Verdict: a zero limit gives `gaussian_limit` when the trace is falling at
/// its end; a positive limit gives `non_gaussian` when the smallest-ε ratio is
/// within 5% of it. Anything else is `inconclusive`.
pub fn condition_report(spec: &SubordinatorSpec, grid: &[f64]) -> Result<ConditionReport> {
    spec.validate()?;
    check_grid(grid)?;
    let tol = Tolerance::QUADRATURE;
    let numeric_trace = grid
        .iter()
        .map(|&e| {
            let m1 = truncated_moment(spec, 1.0, e, tol)?;
            let m2 = truncated_moment(spec, 2.0, e, tol)?;
            Ok((e, m2 / (m1 * m1)))
        })
        .collect::<Result<Vec<_>>>()?;
    let ratios: Vec<f64> = numeric_trace.iter().map(|p| p.1).collect();
    let analytic_limit = analytic_condition_limit(spec);
    let trend = trend(&ratios);
    let last = *ratios.last().expect("grid is non-empty");
    let verdict = if analytic_limit == 0.0 {
        let falling = ratios.len() < 2 || trend == Trend::Decreasing;
        if falling { Verdict::GaussianLimit } else { Verdict::Inconclusive }
    } else if ((last - analytic_limit) / analytic_limit).abs() <= LIMIT_MATCH_TOL {
        Verdict::NonGaussian
    } else {
        Verdict::Inconclusive
    };
    Ok(ConditionReport { family: spec.family().into(), analytic_limit, numeric_trace, trend, verdict })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NecessityReport {
    /// (ε, M⁽²⁾/(M⁽¹⁾)², σ_W⁶M⁽³⁾/σ_ε⁶)
    pub trace: Vec<(f64, f64, f64)>,
    /// Smallest-ε values.
    pub l1: f64,
    pub l2: f64,
    pub l1_trend: Trend,
    pub l2_trend: Trend,
}

pub fn necessity_functionals(nvm: &NvmSpec, grid: &[f64]) -> Result<NecessityReport> {
    nvm.validate()?;
    check_grid(grid)?;
    let tol = Tolerance::QUADRATURE;
    let spec = &nvm.subordinator;
    let trace = grid
        .iter()
        .map(|&e| {
            let m1 = truncated_moment(spec, 1.0, e, tol)?;
            let m2 = truncated_moment(spec, 2.0, e, tol)?;
            let m3 = truncated_moment(spec, 3.0, e, tol)?;
            let var = nvm.mu_w.powi(2) * m2 + nvm.sigma_w.powi(2) * m1;
            Ok((e, m2 / (m1 * m1), nvm.sigma_w.powi(6) * m3 / var.powi(3)))
        })
        .collect::<Result<Vec<_>>>()?;
    let (_, l1, l2) = *trace.last().expect("grid is non-empty");
    let l1s: Vec<f64> = trace.iter().map(|t| t.1).collect();
    let l2s: Vec<f64> = trace.iter().map(|t| t.2).collect();
    Ok(NecessityReport { l1_trend: trend(&l1s), l2_trend: trend(&l2s), trace, l1, l2 })
}

/// Φ_ε = Φ(−3/2, 1/2; −μ_W²ε/(2σ_W²)).
pub fn kummer_factor(mu_w: f64, sigma_w: f64, eps: f64) -> Result<f64> {
    kummer_phi(-1.5, 0.5, -mu_w * mu_w * eps / (2.0 * sigma_w * sigma_w), Tolerance::SERIES)
}

fn check_unit_eps(eps: f64, closed: bool) -> Result<()> {
    let ok = eps > 0.0 && if closed { eps <= 1.0 } else { eps < 1.0 };
    if ok {
        Ok(())
    } else {
        Err(domain(format!("bound needs ε in (0, 1{}, got {eps}", if closed { "]" } else { ")" })))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralBound {
    /// C σ_W³ Φ_ε M⁽³ᐟ²⁾ / σ_ε³
    pub full: f64,
    /// C Φ_ε (ε / M⁽¹⁾)^{1/2}
    pub simplified: f64,
}

impl GeneralBound {
    pub fn value(&self) -> f64 {
        self.full.min(self.simplified)
    }
}

pub fn kolmogorov_bound_parts(nvm: &NvmSpec, eps: f64, tol: Tolerance) -> Result<GeneralBound> {
    nvm.validate()?;
    check_unit_eps(eps, true)?;
    let spec = &nvm.subordinator;
    let m1 = truncated_moment(spec, 1.0, eps, tol)?;
    let m32 = truncated_moment(spec, 1.5, eps, tol)?;
    let m2 = truncated_moment(spec, 2.0, eps, tol)?;
    let var = nvm.mu_w.powi(2) * m2 + nvm.sigma_w.powi(2) * m1;
    let phi = kummer_factor(nvm.mu_w, nvm.sigma_w, eps)?;
    let c = general_constant();
    Ok(GeneralBound {
        full: c * nvm.sigma_w.powi(3) * phi * m32 / var.powf(1.5),
        simplified: c * phi * (eps / m1).sqrt(),
    })
}

/// Kolmogorov distance bound between Y_ε(1) and N(0, 1), for ε ∈ (0, 1].
pub fn kolmogorov_bound_general(nvm: &NvmSpec, eps: f64, tol: Tolerance) -> Result<f64> {
    Ok(kolmogorov_bound_parts(nvm, eps, tol)?.value())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    pub exact: f64,
    /// Leading ε-power term.
    pub asymptotic: f64,
}

/// Closed-form bound for the normal tempered stable process, with leading
/// term ∝ ε^{κ/2}.
pub fn nts_bound(kappa: f64, delta: f64, gamma_: f64, mu_w: f64, sigma_w: f64, eps: f64) -> Result<BoundValue> {
    SubordinatorSpec::tempered_stable(kappa, delta, gamma_)?;
    if !(gamma_ > 0.0) {
        return Err(domain("NTS bound needs gamma > 0"));
    }
    check_unit_eps(eps, false)?;
    let b = 0.5 * gamma_.powf(1.0 / kappa);
    let g1k = gamma(1.0 - kappa);
    let phi = kummer_factor(mu_w, sigma_w, eps)?;
    let exact = BERRY_ESSEEN * 2f64.powf(1.5) * g1k.sqrt() / (delta * kappa * PI * gamma_).sqrt()
        * phi
        * lower_gamma_unchecked(1.0 - kappa, b * eps).powf(-1.5)
        * lower_gamma_unchecked(1.5 - kappa, b * eps);
    let asymptotic = BERRY_ESSEEN * 2f64.powf(1.5 - 0.5 * kappa) * (1.0 - kappa).powf(1.5) * g1k.sqrt()
        / ((1.5 - kappa) * (delta * kappa * PI).sqrt())
        * eps.powf(0.5 * kappa);
    Ok(BoundValue { exact, asymptotic })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GhBranch {
    /// |λ| <= 1/2
    Low,
    /// |λ| > 1/2
    High,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GhBound {
    pub exact: f64,
    pub asymptotic: f64,
    /// The two branches do not join continuously at |λ| = 1/2.
    pub branch: GhBranch,
    pub z0: f64,
    pub h0: f64,
}

/// Closed-form bound for the generalised hyperbolic process, leading term
/// ∝ ε^{1/4}. `z0 = None` uses [`default_z0`].
pub fn gh_bound(
    lambda: f64,
    delta: f64,
    gamma_: f64,
    mu_w: f64,
    sigma_w: f64,
    z0: Option<f64>,
    eps: f64,
) -> Result<GhBound> {
    SubordinatorSpec::gig(lambda, delta, gamma_)?;
    check_unit_eps(eps, false)?;
    let nu = lambda.abs();
    if nu == 0.0 {
        return Err(crate::error::Error::Capability("GH bound needs lambda != 0".into()));
    }
    let z0 = z0.unwrap_or_else(|| default_z0(lambda));
    if !(z0 > 0.0) {
        return Err(domain(format!("z0 must be > 0, got {z0}")));
    }
    let h0 = gig_h0(lambda, z0)?;
    let b = 0.5 * gamma_ * gamma_;
    let pt = (PI / 2.0).sqrt();
    let lp = lambda.max(0.0);
    let phi = kummer_factor(mu_w, sigma_w, eps)?;
    let erf_term = erf(gamma_ * (eps / 2.0).sqrt());
    let be = b * eps;
    let (exact, asymptotic, branch) = if nu <= 0.5 {
        let t1 = 2.0 * lp / (pt * (b * delta).powf(1.5)) * lower_gamma_unchecked(1.5, be);
        let t2 = 2f64.powf(nu + 1.0) * delta.powf(2.0 * nu - 1.5) * gamma(nu)
            / (PI * PI * pt * h0 * z0.powf(2.0 * nu - 1.0) * b.powf(1.5 - nu))
            * lower_gamma_unchecked(1.5 - nu, be);
        let t3 = lower_gamma_unchecked(1.0, be) / (pt.powi(4) * h0 * b * delta.sqrt());
        let pre = BERRY_ESSEEN * phi * gamma_.powf(1.5) / erf_term.powf(1.5);
        let lead = BERRY_ESSEEN / (pt.powf(2.5) * h0 * delta.sqrt()) * eps.powf(0.25);
        (pre * (t1 + t2 + t3), lead, GhBranch::Low)
    } else {
        let t1 = lp * PI / (b * delta).powf(1.5) * lower_gamma_unchecked(1.5, be);
        let t2 = pt / (b * delta.sqrt()) * lower_gamma_unchecked(1.0, be);
        let erfc_term = erfc(z0 * eps.sqrt() / (delta * SQRT_2));
        let pre = BERRY_ESSEEN * phi * (gamma_ * h0).powf(1.5) / (erfc_term * erf_term).powf(1.5);
        let lead = BERRY_ESSEEN * pt.powf(2.5) * h0.powf(1.5) / delta.sqrt() * eps.powf(0.25);
        (pre * (t1 + t2), lead, GhBranch::High)
    };
    Ok(GhBound { exact, asymptotic, branch, z0, h0 })
}

/// S_ε = (μ⁴M⁽⁴⁾ + 6μ²σ²M⁽³⁾ + 3σ⁴M⁽²⁾) / σ_ε⁴.
pub fn s_epsilon(nvm: &NvmSpec, eps: f64, tol: Tolerance) -> Result<f64> {
    nvm.validate()?;
    if !(eps > 0.0) {
        return Err(domain(format!("truncation level must be > 0, got {eps}")));
    }
    let spec = &nvm.subordinator;
    let (mu, sg) = (nvm.mu_w, nvm.sigma_w);
    let m1 = truncated_moment(spec, 1.0, eps, tol)?;
    let m2 = truncated_moment(spec, 2.0, eps, tol)?;
    let m3 = truncated_moment(spec, 3.0, eps, tol)?;
    let m4 = truncated_moment(spec, 4.0, eps, tol)?;
    let var = mu * mu * m2 + sg * sg * m1;
    Ok((mu.powi(4) * m4 + 6.0 * mu * mu * sg * sg * m3 + 3.0 * sg.powi(4) * m2) / (var * var))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundPoint {
    pub epsilon: f64,
    pub bound: f64,
    pub asymptotic: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCurve {
    pub family: String,
    pub nvm: NvmSpec,
    pub points: Vec<BoundPoint>,
    /// Least-squares slope of ln(bound) on ln(ε).
    pub asymptotic_slope: f64,
}

/// Least-squares slope of ln y on ln x.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x.ln(), b + y.ln()));
    let (mx, my) = (sx / n, sy / n);
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for &(x, y) in points {
        let dx = x.ln() - mx;
        sxy += dx * (y.ln() - my);
        sxx += dx * dx;
    }
    sxy / sxx
}

/// Bound curve over a decreasing ε-grid: the NTS and GH closed forms for
/// those families, the general bound for Gamma (no asymptotic column).
pub fn bound_curve(nvm: &NvmSpec, grid: &[f64], z0: Option<f64>) -> Result<BoundCurve> {
    nvm.validate()?;
    check_grid(grid)?;
    let (mu, sg) = (nvm.mu_w, nvm.sigma_w);
    let points = grid
        .iter()
        .map(|&eps| {
            Ok(match nvm.subordinator {
                SubordinatorSpec::TemperedStable { kappa, delta, gamma } => {
                    let b = nts_bound(kappa, delta, gamma, mu, sg, eps)?;
                    BoundPoint { epsilon: eps, bound: b.exact, asymptotic: Some(b.asymptotic) }
                }
                SubordinatorSpec::Gig { lambda, delta, gamma } => {
                    let b = gh_bound(lambda, delta, gamma, mu, sg, z0, eps)?;
                    BoundPoint { epsilon: eps, bound: b.exact, asymptotic: Some(b.asymptotic) }
                }
                SubordinatorSpec::Gamma { .. } => BoundPoint {
                    epsilon: eps,
                    bound: kolmogorov_bound_general(nvm, eps, Tolerance::QUADRATURE)?,
                    asymptotic: None,
                },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let xy: Vec<(f64, f64)> = points.iter().map(|p| (p.epsilon, p.bound)).collect();
    Ok(BoundCurve {
        family: nvm.subordinator.family().into(),
        nvm: *nvm,
        asymptotic_slope: loglog_slope(&xy),
        points,
    })
}
