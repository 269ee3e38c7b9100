//! J_ν and Y_ν of real order ν ∈ [0, 5] and positive argument.
//!
//! Below x = 30 this follows the Temme/Steed scheme: a continued fraction for
//! J'/J at order ν, downward recurrence to |μ| ≤ 1/2, then Temme's series
//! (x < 2) or Steed's complex continued fraction (x ≥ 2) for the Wronskian
//! pair at order μ, and upward recurrence for Y. Above x = 30 the modulus
//! J² + Y² has a rapidly convergent asymptotic series that needs no phase.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};

pub const MAX_ORDER: f64 = 5.0;

const EPS: f64 = 1e-16;
const FPMIN: f64 = 1e-300;
const MAXIT: usize = 100_000;
const ASYMPTOTIC_FROM: f64 = 30.0;

/// Taylor coefficients of 1/Γ(z) about 0, starting at z¹.
const RGAMMA: [f64; 28] = [
    1.0,
    0.577_215_664_901_532_86,
    -0.655_878_071_520_253_88,
    -0.042_002_635_034_095_236,
    0.166_538_611_382_291_49,
    -0.042_197_734_555_544_337,
    -0.009_621_971_527_876_973_6,
    0.007_218_943_246_663_099_5,
    -0.001_165_167_591_859_065_1,
    -0.000_215_241_674_114_950_97,
    0.000_128_050_282_388_116_19,
    -2.013_485_478_078_823_9e-5,
    -1.250_493_482_142_670_7e-6,
    1.133_027_231_981_695_9e-6,
    -2.056_338_416_977_607_1e-7,
    6.116_095_104_481_415_8e-9,
    5.002_007_644_469_222_9e-9,
    -1.181_274_570_487_020_1e-9,
    1.043_426_711_691_100_5e-10,
    7.782_263_439_905_071_3e-12,
    -3.696_805_618_642_205_7e-12,
    5.100_370_287_454_476e-13,
    -2.058_326_053_566_506_8e-14,
    -5.348_122_539_423_018e-15,
    1.226_778_628_238_260_8e-15,
    -1.181_259_301_697_458_8e-16,
    1.186_692_254_751_600_3e-18,
    1.412_380_655_318_031_8e-18,
];

/// (gam1, gam2, 1/Γ(1+μ), 1/Γ(1−μ)) for |μ| ≤ 1/2, where
/// gam1 = (1/Γ(1−μ) − 1/Γ(1+μ))/(2μ) and gam2 = (1/Γ(1−μ) + 1/Γ(1+μ))/2.
fn temme_gammas(mu: f64) -> (f64, f64, f64, f64) {
    // 1/Γ(1+μ) = Σ c_k μ^{k−1}; split into even and odd powers of μ
    let m2 = mu * mu;
    let mut even = 0.0; // c1 + c3 μ² + ...
    let mut odd = 0.0; // c2 + c4 μ² + ...
    for k in (0..RGAMMA.len() / 2).rev() {
        even = even * m2 + RGAMMA[2 * k];
        odd = odd * m2 + RGAMMA[2 * k + 1];
    }
    let gampl = even + mu * odd;
    let gammi = even - mu * odd;
    (-odd, even, gampl, gammi)
}

fn check(nu: f64, x: f64) -> Result<()> {
    if !nu.is_finite() || !(0.0..=MAX_ORDER).contains(&nu) {
        return Err(Error::UnsupportedOrder { nu });
    }
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(format!("Bessel functions need finite x > 0, got {x}")));
    }
    Ok(())
}

/// (J_ν(x), Y_ν(x)) for ν ∈ [0, 5], x > 0.
pub fn bessel_jy(nu: f64, x: f64) -> Result<(f64, f64)> {
    check(nu, x)?;
    if x >= ASYMPTOTIC_FROM {
        return Ok(hankel_asymptotic_jy(nu, x));
    }
    Ok(temme_steed(nu, x))
}

/// |H_ν(x)|² = J_ν(x)² + Y_ν(x)².
pub fn hankel_modulus_sq(nu: f64, x: f64) -> Result<f64> {
    check(nu, x)?;
    Ok(modulus_sq_unchecked(nu, x))
}

pub(crate) fn modulus_sq_unchecked(nu: f64, x: f64) -> f64 {
    if x >= ASYMPTOTIC_FROM {
        return modulus_asymptotic(nu, x);
    }
    let (j, y) = temme_steed(nu, x);
    j * j + y * y
}

/// (πx/2)(J² + Y²) ~ 1 + ½(μ−1)/(2x)² + (1·3)/(2·4)(μ−1)(μ−9)/(2x)⁴ + …, μ = 4ν².
fn modulus_asymptotic(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let inv = 1.0 / (4.0 * x * x);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        let next = term * (odd / (2.0 * kf)) * (mu - odd * odd) * inv;
        if next.abs() > term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < EPS * sum {
            break;
        }
    }
    sum * 2.0 / (PI * x)
}

/// Hankel's expansions for J and Y individually, used only for x ≥ 30.
fn hankel_asymptotic_jy(nu: f64, x: f64) -> (f64, f64) {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    for k in 1..60 {
        let kf = k as f64;
        let odd = 2.0 * kf - 1.0;
        let next = term * (mu - odd * odd) / (kf * 8.0 * x);
        if next.abs() > term.abs() {
            break;
        }
        term = next;
        if k % 2 == 1 {
            q += if (k / 2) % 2 == 0 { term } else { -term };
        } else {
            p += if (k / 2) % 2 == 1 { -term } else { term };
        }
        if term.abs() < EPS {
            break;
        }
    }
    let chi = x - (0.5 * nu + 0.25) * PI;
    let amp = (2.0 / (PI * x)).sqrt();
    (amp * (p * chi.cos() - q * chi.sin()), amp * (p * chi.sin() + q * chi.cos()))
}

fn temme_steed(xnu: f64, x: f64) -> (f64, f64) {
    let nl = if x < 2.0 {
        (xnu + 0.5) as i64
    } else {
        ((xnu - x + 1.5) as i64).max(0)
    };
    let xmu = xnu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;

    // CF1: f = J'_ν/J_ν
    let mut isign = 1.0;
    let mut h = (xnu * xi).max(FPMIN);
    let mut b = xi2 * xnu;
    let mut d = 0.0;
    let mut c = h;
    for _ in 0..MAXIT {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() < EPS {
            break;
        }
    }

    // downward recurrence from ν to μ on an unnormalised J
    let mut rjl = isign * 1e-30;
    let mut rjpl = h * rjl;
    let rjl1 = rjl;
    let mut fact = xnu * xi;
    for _ in 0..nl {
        let rjtemp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * rjtemp - rjl;
        rjl = rjtemp;
    }
    if rjl == 0.0 {
        rjl = EPS;
    }
    let f = rjpl / rjl;

    let (rjmu, rymu, mut ry1);
    if x < 2.0 {
        let x2 = 0.5 * x;
        let pimu = PI * xmu;
        let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = xmu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2, gampl, gammi) = temme_gammas(xmu);
        let mut ff = 2.0 / PI * fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let ee = e.exp();
        let mut p = ee / (gampl * PI);
        let mut q = 1.0 / (ee * PI * gammi);
        let pimu2 = 0.5 * pimu;
        let fact3 = if pimu2.abs() < EPS { 1.0 } else { pimu2.sin() / pimu2 };
        let r = PI * pimu2 * fact3 * fact3;
        let mut c = 1.0;
        let dd = -x2 * x2;
        let mut sum = ff + r * q;
        let mut sum1 = p;
        for i in 1..MAXIT {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - xmu2);
            c *= dd / fi;
            p /= fi - xmu;
            q /= fi + xmu;
            let del = c * (ff + r * q);
            sum += del;
            let del1 = c * p - fi * del;
            sum1 += del1;
            if del.abs() < (1.0 + sum.abs()) * EPS {
                break;
            }
        }
        rymu = -sum;
        ry1 = -sum1 * xi2;
        let rymup = xmu * xi * rymu - ry1;
        rjmu = w / (rymup - f * rymu);
    } else {
        // CF2: p + iq = (J' + iY')/(J + iY)
        let mut a = 0.25 - xmu2;
        let mut p = -0.5 * xi;
        let mut q = 1.0;
        let br = 2.0 * x;
        let mut bi = 2.0;
        let mut fact = a * xi / (p * p + q * q);
        let mut cr = br + q * fact;
        let mut ci = bi + p * fact;
        let mut den = br * br + bi * bi;
        let mut dr = br / den;
        let mut di = -bi / den;
        let mut dlr = cr * dr - ci * di;
        let mut dli = cr * di + ci * dr;
        let mut temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        for i in 2..MAXIT {
            a += (2 * (i - 1)) as f64;
            bi += 2.0;
            dr = a * dr + br;
            di = a * di + bi;
            if dr.abs() + di.abs() < FPMIN {
                dr = FPMIN;
            }
            fact = a / (cr * cr + ci * ci);
            cr = br + cr * fact;
            ci = bi - ci * fact;
            if cr.abs() + ci.abs() < FPMIN {
                cr = FPMIN;
            }
            den = dr * dr + di * di;
            dr /= den;
            di /= -den;
            dlr = cr * dr - ci * di;
            dli = cr * di + ci * dr;
            temp = p * dlr - q * dli;
            q = p * dli + q * dlr;
            p = temp;
            if (dlr - 1.0).abs() + dli.abs() < EPS {
                break;
            }
        }
        let gam = (p - f) / q;
        let mag = (w / ((p - f) * gam + q)).sqrt();
        rjmu = mag.copysign(rjl);
        rymu = rjmu * gam;
        let rymup = rymu * (p + q / gam);
        ry1 = xmu * xi * rymu - rymup;
    }

    let j = rjl1 * (rjmu / rjl);
    let mut ymu = rymu;
    for i in 1..=nl {
        let rytemp = (xmu + i as f64) * xi2 * ry1 - ymu;
        ymu = ry1;
        ry1 = rytemp;
    }
    (j, ymu)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn temme_gammas_match_direct_evaluation() {
        for &mu in &[-0.5, -0.3, -0.01, 0.0, 0.2, 0.45, 0.5] {
            let (_, gam2, gampl, gammi) = temme_gammas(mu);
            let direct_pl = 1.0 / libm::tgamma(1.0 + mu);
            let direct_mi = 1.0 / libm::tgamma(1.0 - mu);
            assert!((gampl - direct_pl).abs() < 1e-14, "mu={mu}");
            assert!((gammi - direct_mi).abs() < 1e-14, "mu={mu}");
            assert!((gam2 - 0.5 * (direct_pl + direct_mi)).abs() < 1e-14);
        }
    }

    #[test]
    fn half_order_is_exact() {
        for &x in &[0.1, 1.0, 2.0, 10.0, 29.9, 30.0, 100.0] {
            let m = hankel_modulus_sq(0.5, x).unwrap();
            assert!((m * PI * x / 2.0 - 1.0).abs() < 1e-12, "x={x}");
        }
    }

    #[test]
    fn branches_agree_at_switch() {
        for &nu in &[0.0, 0.2, 1.7, 4.3, 5.0] {
            let (j0, y0) = temme_steed(nu, ASYMPTOTIC_FROM);
            let (j1, y1) = hankel_asymptotic_jy(nu, ASYMPTOTIC_FROM);
            assert!((j0 - j1).abs() < 1e-12 && (y0 - y1).abs() < 1e-12, "nu={nu}");
            let m = modulus_asymptotic(nu, ASYMPTOTIC_FROM);
            assert!((m - (j0 * j0 + y0 * y0)).abs() < 1e-12 * m, "nu={nu}");
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(matches!(hankel_modulus_sq(5.5, 1.0), Err(Error::UnsupportedOrder { .. })));
        assert!(hankel_modulus_sq(1.0, 0.0).is_err());
    }
}
