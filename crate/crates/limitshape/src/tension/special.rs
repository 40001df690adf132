use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

// B_n / (n + 1)! for n = 0, 1, 2, 4, 6, ...
const DILOG_SERIES: [f64; 23] = [
    1.0,
    -0.25,
    0.027777777777777776,
    -0.0002777777777777778,
    4.72411186696901e-06,
    -9.185773074661964e-08,
    1.8978869988971e-09,
    -4.0647616451442256e-11,
    8.921691020456452e-13,
    -1.9939295860721074e-14,
    4.518980029619918e-16,
    -1.0356517612181247e-17,
    2.395218621026187e-19,
    -5.581785874325009e-21,
    1.3091507554183213e-22,
    -3.0874198024267403e-24,
    7.315975652702203e-26,
    -1.740845657234001e-27,
    4.1576356446139e-29,
    -9.962148488284622e-31,
    2.3940344248961652e-32,
    -5.76834735536739e-34,
    1.393179479647008e-35,
];

// |B_2k| / (2k (2k + 1)!) for k = 1, 2, ...
const CLAUSEN_SERIES: [f64; 29] = [
    0.013888888888888888,
    6.944444444444444e-05,
    7.873519778281683e-07,
    1.1482216343327455e-08,
    1.8978869988971e-10,
    3.387301370953521e-12,
    6.372636443183181e-14,
    1.2462059912950672e-15,
    2.5105444608999545e-17,
    5.178258806090623e-19,
    1.0887357368300849e-20,
    2.325744114302087e-22,
    5.03519521314739e-24,
    1.1026499294381215e-25,
    2.4386585509007344e-27,
    5.440142678856253e-29,
    1.2228340131217352e-30,
    2.767263468967951e-32,
    6.3000905918320136e-34,
    1.4420868388418476e-35,
    3.3170939991595428e-37,
    7.663913557920658e-39,
    1.7778714733830659e-40,
    4.1396058982341375e-42,
    9.671557036081102e-44,
    2.2667187016766123e-45,
    5.327956311328254e-47,
    1.2557248389564336e-48,
    2.967000542247094e-50,
];

const ZETA2: f64 = PI * PI / 6.0;

fn dilog_series(z: Complex64) -> Complex64 {
    let u = -(Complex64::new(1.0, 0.0) - z).ln();
    let u2 = u * u;
    let mut sum = u - 0.25 * u2;
    let mut p = u;
    for &c in &DILOG_SERIES[2..] {
        p *= u2;
        sum += c * p;
    }
    sum
}

/// The principal dilogarithm `Li2(z)`, with the cut on real `z > 1`.
pub fn dilog(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("dilog of non-finite {z}")));
    }
    if z.im == 0.0 && z.re >= 1.0 {
        if z.re == 1.0 {
            return Ok(Complex64::new(ZETA2, 0.0));
        }
        return Err(Error::BranchCut(format!("{z}")));
    }
    if z.norm_sqr() == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let one = Complex64::new(1.0, 0.0);
    if z.norm_sqr() > 1.0 {
        let l = (-z).ln();
        return Ok(-inner_dilog(one / z) - ZETA2 - 0.5 * l * l);
    }
    Ok(inner_dilog(z))
}

fn inner_dilog(z: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    if z.re > 0.5 {
        let w = one - z;
        if w.norm_sqr() == 0.0 {
            return Complex64::new(ZETA2, 0.0);
        }
        return -dilog_series(w) + ZETA2 - z.ln() * w.ln();
    }
    dilog_series(z)
}

/// `Cl2(θ) = −∫₀^θ log|2 sin(t/2)| dt`.
pub fn clausen(theta: f64) -> f64 {
    let mut x = theta.rem_euclid(2.0 * PI);
    if x > PI {
        x -= 2.0 * PI;
    }
    if x == 0.0 || x.abs() == PI {
        return 0.0;
    }
    let x2 = x * x;
    let mut p = x;
    let mut sum = x - x * x.abs().ln();
    for &c in &CLAUSEN_SERIES {
        p *= x2;
        sum += c * p;
    }
    sum
}

/// Lobachevsky function `L(x) = −∫₀^x log(2 sin t) dt`.
pub fn lobachevsky(x: f64) -> f64 {
    0.5 * clausen(2.0 * x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dilog_known_values() {
        let c = |x: f64| Complex64::new(x, 0.0);
        assert!((dilog(c(0.5)).unwrap().re - (ZETA2 / 2.0 - 0.5 * 2f64.ln().powi(2))).abs() < 1e-15);
        assert!((dilog(c(-1.0)).unwrap().re + ZETA2 / 2.0).abs() < 1e-15);
        assert!((dilog(c(1.0)).unwrap().re - ZETA2).abs() < 1e-15);
        assert!(matches!(dilog(c(2.0)), Err(Error::BranchCut(_))));
        // Li2(i) = −π²/48 + i G
        let v = dilog(Complex64::new(0.0, 1.0)).unwrap();
        assert!((v.re + PI * PI / 48.0).abs() < 1e-15);
        assert!((v.im - 0.915_965_594_177_219).abs() < 1e-15);
    }

    #[test]
    fn clausen_maximum() {
        assert!((clausen(PI / 3.0) - 1.014_941_606_409_653_6).abs() < 1e-15);
        assert!((clausen(-PI / 3.0) + 1.014_941_606_409_653_6).abs() < 1e-15);
        assert!((clausen(PI / 3.0 + 2.0 * PI) - clausen(PI / 3.0)).abs() < 1e-13);
    }
}
