use std::f64::consts::SQRT_2;

use nvm_levy::bounds::*;
use nvm_levy::nvm::NvmSpec;
use nvm_levy::specfun::Tolerance;
use nvm_levy::subordinators::{truncated_moment, SubordinatorSpec};
use proptest::prelude::*;

const TOL: Tolerance = Tolerance::QUADRATURE;

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn ng() -> NvmSpec {
    NvmSpec::new(SubordinatorSpec::gamma(2.0, SQRT_2).unwrap(), 1.0, 2.0).unwrap()
}
fn nts() -> NvmSpec {
    NvmSpec::new(SubordinatorSpec::tempered_stable(0.5, 1.0, 1.35).unwrap(), 1.0, 2.0).unwrap()
}
fn gh() -> NvmSpec {
    NvmSpec::new(SubordinatorSpec::gig(0.2, 1.3, SQRT_2).unwrap(), 1.0, 2.0).unwrap()
}

fn log_grid(hi: f64, lo: f64, per_decade: usize) -> Vec<f64> {
    let n = ((hi / lo).log10() * per_decade as f64).round() as usize;
    (0..=n).map(|k| hi * 10f64.powf(-(k as f64) / per_decade as f64)).collect()
}

// mpmath, 40 digits, see oracle/bounds.py
#[test]
fn closed_form_bounds_match_oracle() {
    let b = nts_bound(0.5, 1.0, 1.35, 1.0, 2.0, 1e-4).unwrap();
    assert!(rel(b.exact, 0.07123886772674666349) < 1e-10, "{}", b.exact);

    let b = gh_bound(0.8, 1.3, SQRT_2, 1.0, 2.0, None, 1e-3).unwrap();
    assert_eq!(b.branch, GhBranch::High);
    assert!(rel(b.exact, 0.17843698528893047922) < 1e-10, "{}", b.exact);

    let b = gh_bound(0.2, 1.3, SQRT_2, 1.0, 2.0, None, 1e-4).unwrap();
    assert_eq!(b.branch, GhBranch::Low);
    assert!(rel(b.exact, 0.11649987714047630625) < 1e-10, "{}", b.exact);

    let b = gh_bound(-0.8, 1.0, 1.0, 0.5, 1.0, None, 1e-2).unwrap();
    assert!(rel(b.z0, 0.49269233442410616014) < 1e-12);
    assert!(rel(b.exact, 0.36802579964273902547) < 1e-10, "{}", b.exact);
}

#[test]
fn closed_form_slopes_over_asymptotic_window() {
    let grid = log_grid(1e-3, 1e-6, 4);
    let pts: Vec<_> = grid.iter().map(|&e| (e, nts_bound(0.5, 1.0, 1.35, 1.0, 2.0, e).unwrap().exact)).collect();
    assert!((loglog_slope(&pts) - 0.25).abs() < 0.03);
    let pts: Vec<_> = grid.iter().map(|&e| (e, nts_bound(0.3, 2.0, 0.7, 0.5, 1.0, e).unwrap().exact)).collect();
    assert!((loglog_slope(&pts) - 0.15).abs() < 0.03);
    for lambda in [0.2, -0.3, 0.8, -1.5] {
        let pts: Vec<_> =
            grid.iter().map(|&e| (e, gh_bound(lambda, 1.3, SQRT_2, 1.0, 2.0, None, e).unwrap().exact)).collect();
        assert!((loglog_slope(&pts) - 0.25).abs() < 0.03, "lambda {lambda}");
    }
}

#[test]
fn leading_terms_capture_small_eps() {
    let b = nts_bound(0.5, 1.0, 1.35, 1.0, 2.0, 1e-10).unwrap();
    assert!(rel(b.exact, b.asymptotic) < 1e-3);
    for (lambda, gamma) in [(0.2, SQRT_2), (0.8, SQRT_2), (1.2, 0.6)] {
        let b = gh_bound(lambda, 1.3, gamma, 1.0, 2.0, None, 1e-14).unwrap();
        assert!(rel(b.exact, b.asymptotic) < 1e-3, "lambda {lambda} gamma {gamma}: {b:?}");
    }
    // the correction decays like ε^{1/2-|λ|}, slowly as |λ| nears 1/2
    let gap = |e: f64| {
        let b = gh_bound(0.4, 1.3, 2.5, 1.0, 2.0, None, e).unwrap();
        rel(b.exact, b.asymptotic)
    };
    assert!(gap(1e-14) < gap(1e-10) && gap(1e-10) < gap(1e-6) && gap(1e-14) < 0.05);
}

#[test]
fn gh_branch_follows_abs_lambda() {
    for (lambda, branch) in [(0.5, GhBranch::Low), (-0.5, GhBranch::Low), (0.51, GhBranch::High), (-2.0, GhBranch::High)] {
        assert_eq!(gh_bound(lambda, 1.0, 1.0, 1.0, 1.0, None, 1e-3).unwrap().branch, branch);
    }
}

#[test]
fn bound_argument_checks() {
    assert!(nts_bound(0.5, 1.0, 1.35, 1.0, 2.0, 1.0).is_err());
    assert!(nts_bound(1.0, 1.0, 1.35, 1.0, 2.0, 0.1).is_err());
    assert!(gh_bound(0.2, 1.0, 1.0, 1.0, 1.0, Some(0.0), 0.1).is_err());
    assert!(gh_bound(0.2, 1.0, 1.0, 1.0, 1.0, Some(-1.0), 0.1).is_err());
    assert!(gh_bound(0.2, 1.0, 1.0, 1.0, 1.0, None, 0.0).is_err());
    assert!(kolmogorov_bound_general(&nts(), 1.5, TOL).is_err());
    assert!(kolmogorov_bound_general(&nts(), 1.0, TOL).is_ok());
    assert!(condition_report(&ng().subordinator, &[1e-3, 1e-2]).is_err());
    assert!(condition_report(&ng().subordinator, &[]).is_err());
}

#[test]
fn general_bound_is_flat_for_gamma_and_vanishes_otherwise() {
    let grid = log_grid(1e-3, 1e-6, 4);
    let vals: Vec<f64> = grid.iter().map(|&e| kolmogorov_bound_general(&ng(), e, TOL).unwrap()).collect();
    let (lo, hi) = vals.iter().fold((f64::MAX, 0f64), |(a, b), &v| (a.min(v), b.max(v)));
    assert!(hi / lo < 1.1);
    assert!(lo > 0.5);
    for nvm in [nts(), gh()] {
        let a = kolmogorov_bound_general(&nvm, 1e-3, TOL).unwrap();
        let b = kolmogorov_bound_general(&nvm, 1e-8, TOL).unwrap();
        assert!(b < a / 10.0);
    }
}

#[test]
fn zero_drift_gives_unit_kummer_factor() {
    let nvm = NvmSpec::new(SubordinatorSpec::tempered_stable(0.5, 1.0, 1.35).unwrap(), 0.0, 1.7).unwrap();
    assert_eq!(kummer_factor(0.0, 1.7, 0.3).unwrap(), 1.0);
    let parts = kolmogorov_bound_parts(&nvm, 1e-3, TOL).unwrap();
    let m1 = truncated_moment(&nvm.subordinator, 1.0, 1e-3, TOL).unwrap();
    assert!(rel(parts.simplified, general_constant() * (1e-3 / m1).sqrt()) < 1e-14);
}

#[test]
fn condition_reports_per_family() {
    let grid = log_grid(1e-2, 1e-8, 1);
    let r = condition_report(&ng().subordinator, &grid).unwrap();
    assert_eq!(r.analytic_limit, 0.25);
    assert_eq!(r.verdict, Verdict::NonGaussian);
    assert!(rel(r.numeric_trace.last().unwrap().1, 0.25) < 0.05);

    let r = condition_report(&nts().subordinator, &grid).unwrap();
    assert_eq!((r.analytic_limit, r.verdict), (0.0, Verdict::GaussianLimit));

    let r = condition_report(&gh().subordinator, &grid).unwrap();
    assert_eq!((r.analytic_limit, r.verdict), (0.0, Verdict::GaussianLimit));
    assert!(r.numeric_trace.windows(2).all(|w| w[1].1 < w[0].1));

    // a single coarse point cannot pin a non-zero limit
    let r = condition_report(&SubordinatorSpec::gamma(2.0, 10.0).unwrap(), &[0.5]).unwrap();
    assert_eq!(r.verdict, Verdict::Inconclusive);
}

#[test]
fn necessity_functionals_for_ng() {
    let r = necessity_functionals(&ng(), &log_grid(1e-2, 1e-8, 1)).unwrap();
    assert!(rel(r.l1, 0.25) < 0.01);
    assert!(rel(r.l2, 1.0 / 12.0) < 0.01);
    let r = necessity_functionals(&nts(), &log_grid(1e-2, 1e-8, 1)).unwrap();
    assert!(r.l1 < 1e-3);
    assert_eq!(r.l1_trend, Trend::Decreasing);
}

#[test]
fn s_epsilon_values() {
    assert!(rel(s_epsilon(&ng(), 1e-3, TOL).unwrap(), 0.75031251171275948509) < 1e-9);
    assert!(rel(s_epsilon(&ng(), 1e-9, TOL).unwrap(), 0.75) < 1e-5);

    let sym = NvmSpec::new(gh().subordinator, 0.0, 3.0).unwrap();
    let m1 = truncated_moment(&sym.subordinator, 1.0, 1e-4, TOL).unwrap();
    let m2 = truncated_moment(&sym.subordinator, 2.0, 1e-4, TOL).unwrap();
    assert!(rel(s_epsilon(&sym, 1e-4, TOL).unwrap(), 3.0 * m2 / (m1 * m1)) < 1e-12);

    let trace: Vec<f64> = log_grid(1e-1, 1e-6, 1).iter().map(|&e| s_epsilon(&nts(), e, TOL).unwrap()).collect();
    assert!(trace.windows(2).all(|w| w[1] < w[0]));
    assert!(*trace.last().unwrap() < 1e-2);
}

#[test]
fn bound_curve_records_slope() {
    let c = bound_curve(&nts(), &log_grid(1e-3, 1e-6, 2), None).unwrap();
    assert_eq!(c.family, "tempered_stable");
    assert!(c.points.iter().all(|p| p.bound > 0.0 && p.asymptotic.is_some()));
    assert!((c.asymptotic_slope - 0.25).abs() < 0.03);
    let c = bound_curve(&ng(), &log_grid(1e-3, 1e-6, 2), None).unwrap();
    assert!(c.asymptotic_slope.abs() < 0.01);
    assert!(c.points.iter().all(|p| p.asymptotic.is_none()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn simplified_bound_dominates_full(
        family in 0usize..3,
        le in -9.0f64..0.0,
        mu in -2.0f64..2.0,
        sigma in 0.3f64..3.0,
    ) {
        let sub = match family {
            0 => SubordinatorSpec::gamma(2.0, SQRT_2).unwrap(),
            1 => SubordinatorSpec::tempered_stable(0.5, 1.0, 1.35).unwrap(),
            _ => SubordinatorSpec::gig(0.2, 1.3, SQRT_2).unwrap(),
        };
        let nvm = NvmSpec::new(sub, mu, sigma).unwrap();
        let p = kolmogorov_bound_parts(&nvm, 10f64.powf(le), TOL).unwrap();
        prop_assert!(p.full > 0.0);
        prop_assert!(p.simplified >= p.full * (1.0 - 1e-9), "{:?}", p);
    }

    #[test]
    fn closed_forms_are_positive_and_increasing(le in -9.0f64..-0.5, lambda in -2.0f64..2.0) {
        prop_assume!(lambda.abs() > 1e-3);
        let e = 10f64.powf(le);
        let a = gh_bound(lambda, 1.3, SQRT_2, 1.0, 2.0, None, e).unwrap();
        let b = gh_bound(lambda, 1.3, SQRT_2, 1.0, 2.0, None, e * 0.5).unwrap();
        prop_assert!(a.exact > 0.0 && b.exact < a.exact);
        let a = nts_bound(0.5, 1.0, 1.35, 1.0, 2.0, e).unwrap();
        prop_assert!(a.exact > 0.0 && a.asymptotic > 0.0);
    }
}
