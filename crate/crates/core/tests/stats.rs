use nvm_levy::mc::replicate;
use nvm_levy::rng::{standard_normal, stream};
use nvm_levy::stats::*;
use proptest::prelude::*;
use rand::Rng;

fn normals(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = stream(seed, 0);
    (0..n).map(|_| standard_normal(&mut rng)).collect()
}

// scipy.stats.kstwobign.sf
#[test]
fn kolmogorov_survival_matches_scipy() {
    let table = [
        (0.3, 0.9999906941986655),
        (0.6, 0.8642827790506042),
        (1.0, 0.26999967167735456),
        (1.18, 0.1234538094297657),
        (1.5, 0.022217962616525127),
        (2.0, 0.0006709252557796953),
        (3.0, 3.045995948942526e-08),
    ];
    for (l, p) in table {
        assert!((kolmogorov_survival(l) / p - 1.0).abs() < 1e-10, "{l}");
    }
    assert_eq!(kolmogorov_survival(0.0), 1.0);
}

#[test]
fn one_sample_statistic_matches_brute_force() {
    let x = normals(2024, 10_000);
    let r = ks_one_sample(&x, normal_cdf).unwrap();
    let n = x.len() as f64;
    let mut d: f64 = 0.0;
    for &xi in &x {
        let below = x.iter().filter(|&&y| y < xi).count() as f64 / n;
        let upto = x.iter().filter(|&&y| y <= xi).count() as f64 / n;
        let f = normal_cdf(xi);
        d = d.max((f - below).abs()).max((upto - f).abs());
    }
    assert!((r.statistic - d).abs() < 1e-15);
    assert!(r.p_value > 0.01);
    assert_eq!((r.n, r.m), (10_000, None));
}

#[test]
fn one_sample_degenerate_inputs() {
    let r = ks_one_sample(&[0.0; 50], normal_cdf).unwrap();
    assert!(r.statistic >= 0.5);
    assert!(ks_one_sample(&[0.0; 5], normal_cdf).is_err());
    assert!(ks_one_sample(&normals(1, 100), |x| if x > 0.0 { 2.0 } else { 0.0 }).is_err());
    assert!(ks_one_sample(&normals(1, 100), |x| -normal_cdf(x) + 1.0).is_err());
}

#[test]
fn one_sample_null_calibration() {
    let rejects = replicate(77, 2000, |rng, _| {
        let x: Vec<f64> = (0..500).map(|_| rng.random::<f64>()).collect();
        ks_one_sample(&x, |u| u.clamp(0.0, 1.0)).unwrap().p_value < 0.01
    });
    let rate = rejects.iter().filter(|&&r| r).count() as f64 / 2000.0;
    assert!((rate - 0.01).abs() <= 0.005, "rejection rate {rate}");
}

#[test]
fn two_sample_edge_cases() {
    let a = normals(3, 200);
    assert_eq!(ks_two_sample(&a, &a).unwrap().statistic, 0.0);
    let b: Vec<f64> = a.iter().map(|x| x + 100.0).collect();
    let r = ks_two_sample(&a, &b).unwrap();
    assert_eq!(r.statistic, 1.0);
    assert!(r.p_value < 1e-12);
    assert!(ks_two_sample(&a, &a[..5]).is_err());
}

#[test]
fn qq_linear_relations() {
    let a = normals(9, 1000);
    for (x, y) in qq_points(&a, &a, 50).unwrap() {
        assert_eq!(x, y);
    }
    let b: Vec<f64> = a.iter().map(|x| 2.0 * x).collect();
    for (x, y) in qq_points(&a, &b, 50).unwrap() {
        assert!((y - 2.0 * x).abs() < 1e-12);
    }
    assert!(qq_points(&a, &b, 1).is_err());
}

#[test]
fn moment_summaries() {
    let c = moments(&[3.5; 40], 0).unwrap();
    assert_eq!((c.mean, c.variance), (3.5, 0.0));

    let x = normals(17, 100_000);
    let m = moments(&x, 1).unwrap();
    assert!(m.mean.abs() < 3.0 * m.se_mean);
    assert!((m.variance - 1.0).abs() < 3.0 * m.se_variance);
    assert!(m.excess_kurtosis.abs() < 3.0 * m.se_kurtosis);
    assert!(m.kurtosis_ci99.0 < m.excess_kurtosis && m.excess_kurtosis < m.kurtosis_ci99.1);
    assert_eq!(moments(&x, 1).unwrap(), m);

    // Laplace has excess kurtosis 3
    let mut rng = stream(5, 0);
    let lap: Vec<f64> = (0..20_000)
        .map(|_| {
            let u: f64 = rng.random::<f64>() - 0.5;
            -u.signum() * (1.0 - 2.0 * u.abs()).ln()
        })
        .collect();
    let m = moments(&lap, 2).unwrap();
    assert!(m.kurtosis_ci99.0 > 1.5 && m.kurtosis_ci99.1 < 4.5, "{:?}", m.kurtosis_ci99);
    assert!(moments(&lap[..10], 0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn two_sample_is_symmetric(a in prop::collection::vec(-5.0f64..5.0, 10..80), b in prop::collection::vec(-5.0f64..5.0, 10..80)) {
        let ab = ks_two_sample(&a, &b).unwrap();
        let ba = ks_two_sample(&b, &a).unwrap();
        prop_assert_eq!(ab.statistic, ba.statistic);
        prop_assert!((ab.p_value - ba.p_value).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&ab.statistic) && (0.0..=1.0).contains(&ab.p_value));
    }

    #[test]
    fn qq_ignores_input_order(mut a in prop::collection::vec(-5.0f64..5.0, 2..60), k in 2usize..20, seed in any::<u64>()) {
        let b: Vec<f64> = a.iter().map(|x| x * 3.0 - 1.0).collect();
        let before = qq_points(&a, &b, k).unwrap();
        let mut rng = stream(seed, 0);
        for i in (1..a.len()).rev() {
            a.swap(i, rng.random_range(0..=i));
        }
        prop_assert_eq!(before, qq_points(&a, &b, k).unwrap());
    }
}
