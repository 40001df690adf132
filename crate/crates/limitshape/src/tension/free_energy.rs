use super::quadrature::integrate;
use crate::dimers::SpectralCurve;
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

const SAMPLES: usize = 128;
const QUAD_TOL: f64 = 1e-13;
const HESS_STEP: f64 = 1e-5;

/// The free energy `f(H, V) = (2π)^{-2} ∫∫ log|P(e^{H+iφ}, e^{V+iψ})| dφ dψ` of a spectral curve.
///
/// The `φ` average is done exactly by Jensen's formula; the `ψ` integral is split at the
/// points where a root in `z` crosses `|z| = e^H` and each piece is integrated by adaptive
/// Gauss–Kronrod.
#[derive(Debug, Clone)]
pub struct FreeEnergyField {
    curve: SpectralCurve,
    z_fiber: Fiber,
    w_fiber: Fiber,
}

#[derive(Debug, Clone)]
struct Fiber {
    terms: Vec<(i32, i32, f64)>,
    imin: i32,
    degree: usize,
}

impl Fiber {
    fn new(curve: &SpectralCurve) -> Self {
        let (imin, imax) = curve.z_range();
        let terms = curve.terms().map(|((i, j), c)| (i, j, c)).collect();
        Self { terms, imin, degree: (imax - imin) as usize }
    }

    /// `(1/2π) ∫ log|P(e^{h+iφ}, w)| dφ` and its derivative in `h` at `w = e^{v+iψ}`.
    fn jensen(&self, h: f64, v: f64, psi: f64) -> Result<(f64, i32)> {
        let mut q = vec![Complex64::new(0.0, 0.0); self.degree + 1];
        for &(i, j, c) in &self.terms {
            q[(i - self.imin) as usize] += c * Complex64::from_polar((j as f64 * v).exp(), j as f64 * psi);
        }
        let lo = q.iter().position(|c| c.norm_sqr() > 0.0).ok_or(Error::SingularLocus)?;
        let hi = q.iter().rposition(|c| c.norm_sqr() > 0.0).unwrap_or(lo);
        let (g, inside) = jensen_poly(&q[lo..=hi], h);
        let shift = self.imin + lo as i32;
        Ok((shift as f64 * h + g, shift + inside as i32))
    }
}

/// Jensen's formula for `Σ a_k z^k` with nonzero end coefficients.
fn jensen_poly(a: &[Complex64], h: f64) -> (f64, usize) {
    let ln = |c: Complex64| c.norm().ln();
    match a.len() {
        1 => (ln(a[0]), 0),
        2 => {
            let (l1, l0) = (ln(a[1]), ln(a[0]));
            ((h + l1).max(l0), usize::from(l0 - l1 < h))
        }
        3 => {
            let (c, b, a2) = (a[0], a[1], a[2]);
            let sq = (b * b - 4.0 * a2 * c).sqrt();
            let sum = if (b.conj() * sq).re >= 0.0 { b + sq } else { b - sq };
            let m = -0.5 * sum;
            let (la, lm, lc) = (ln(a2), ln(m), ln(c));
            let g = (h + la).max(lm) + h.max(lc - lm);
            (g, usize::from(lm - la < h) + usize::from(lc - lm < h))
        }
        _ => {
            let roots = polynomial_roots(a);
            let lead = ln(a[a.len() - 1]);
            let logs: Vec<f64> = roots.iter().map(|r| r.norm().ln()).collect();
            (lead + logs.iter().map(|&l| h.max(l)).sum::<f64>(), logs.iter().filter(|&&l| l < h).count())
        }
    }
}

/// Roots of `Σ a_k z^k` by Durand–Kerner iteration.
pub(crate) fn polynomial_roots(a: &[Complex64]) -> Vec<Complex64> {
    let n = a.len() - 1;
    let lead = a[n];
    let monic: Vec<Complex64> = a.iter().map(|c| c / lead).collect();
    let radius = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n).map(|k| Complex64::from_polar(0.5 * radius, 0.4 + 2.0 * PI * k as f64 / n as f64)).collect();
    let eval = |x: Complex64| monic.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c);
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for m in 0..n {
                if m != k {
                    den *= z[k] - z[m];
                }
            }
            if den.norm_sqr() == 0.0 {
                continue;
            }
            let step = eval(z[k]) / den;
            z[k] -= step;
            moved = moved.max(step.norm() / (1.0 + z[k].norm()));
        }
        if moved < 1e-16 {
            break;
        }
    }
    z
}

/// Breakpoints and per-piece slopes of `ψ ↦ ∂_h Jensen` on `[−π, π]`.
fn pieces(fiber: &Fiber, h: f64, v: f64) -> Result<Vec<(f64, f64, i32)>> {
    let slope = |psi: f64| fiber.jensen(h, v, psi).map(|r| r.1);
    let mut out = Vec::new();
    let step = 2.0 * PI / SAMPLES as f64;
    let mut start = -PI;
    let mut prev = slope(-PI)?;
    for k in 1..=SAMPLES {
        let x = if k == SAMPLES { PI } else { -PI + k as f64 * step };
        let cur = slope(x)?;
        if cur != prev {
            let (mut a, mut b) = (x - step, x);
            for _ in 0..64 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                if slope(m)? == prev {
                    a = m;
                } else {
                    b = m;
                }
            }
            let cut = 0.5 * (a + b);
            out.push((start, cut, prev));
            start = cut;
            prev = cur;
        }
    }
    out.push((start, PI, prev));
    Ok(out)
}

impl FreeEnergyField {
    pub fn new(curve: SpectralCurve) -> Result<Self> {
        if curve.is_empty() {
            return Err(Error::Domain("the zero polynomial has no free energy".into()));
        }
        let z_fiber = Fiber::new(&curve);
        let w_fiber = Fiber::new(&curve.swapped());
        Ok(Self { curve, z_fiber, w_fiber })
    }

    pub fn curve(&self) -> &SpectralCurve {
        &self.curve
    }

    pub fn value(&self, h: f64, v: f64) -> Result<f64> {
        check_finite(h, v)?;
        let mut total = 0.0;
        for (a, b, _) in pieces(&self.z_fiber, h, v)? {
            total += integrate(|psi| self.z_fiber.jensen(h, v, psi).map(|r| r.0), a, b, QUAD_TOL)?;
        }
        if !total.is_finite() {
            return Err(Error::SingularLocus);
        }
        Ok(total / (2.0 * PI))
    }

    /// `(∂_H f, ∂_V f)`, exact up to the location of the breakpoints.
    pub fn gradient(&self, h: f64, v: f64) -> Result<[f64; 2]> {
        check_finite(h, v)?;
        let avg = |fiber: &Fiber, h: f64, v: f64| -> Result<f64> {
            Ok(pieces(fiber, h, v)?.iter().map(|&(a, b, n)| n as f64 * (b - a)).sum::<f64>() / (2.0 * PI))
        };
        Ok([avg(&self.z_fiber, h, v)?, avg(&self.w_fiber, v, h)?])
    }

    /// Central differences of [`FreeEnergyField::gradient`], symmetrized.
    pub fn hessian(&self, h: f64, v: f64) -> Result<[[f64; 2]; 2]> {
        let e = HESS_STEP;
        let gh = [self.gradient(h + e, v)?, self.gradient(h - e, v)?];
        let gv = [self.gradient(h, v + e)?, self.gradient(h, v - e)?];
        let hh = (gh[0][0] - gh[1][0]) / (2.0 * e);
        let vv = (gv[0][1] - gv[1][1]) / (2.0 * e);
        let hv = 0.5 * ((gh[0][1] - gh[1][1]) + (gv[0][0] - gv[1][0])) / (2.0 * e);
        Ok([[hh, hv], [hv, vv]])
    }
}

fn check_finite(h: f64, v: f64) -> Result<()> {
    if h.is_finite() && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("non-finite field ({h}, {v})")))
    }
}

/// Free energy of `curve` at `(H, V)`.
pub fn free_energy(curve: &SpectralCurve, h: f64, v: f64) -> Result<f64> {
    FreeEnergyField::new(curve.clone())?.value(h, v)
}

/// Tensor-product periodic trapezoid rule with `n × n` nodes offset by half a cell.
pub fn free_energy_trapezoid(curve: &SpectralCurve, h: f64, v: f64, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain(format!("resolution {n} too small")));
    }
    check_finite(h, v)?;
    let step = 2.0 * PI / n as f64;
    let mut rows = Vec::with_capacity(n);
    for k in 0..n {
        let w = Complex64::from_polar(v.exp(), (k as f64 + 0.5) * step);
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let z = Complex64::from_polar(h.exp(), (j as f64 + 0.5) * step);
            let p = curve.eval(z, w).norm();
            if p == 0.0 || !p.is_finite() {
                return Err(Error::SingularLocus);
            }
            row.push(p.ln());
        }
        rows.push(pairwise_sum(&row));
    }
    Ok(pairwise_sum(&rows) / (n * n) as f64)
}

fn pairwise_sum(x: &[f64]) -> f64 {
    if x.len() <= 8 {
        return x.iter().sum();
    }
    let (a, b) = x.split_at(x.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// Closed-form gradient of the free-fermion free energy,
/// `∂_H f = (1/π) arccos((sinh(V−H) tan u − sinh(V+H) cot u) / (2 cosh H))` and its mirror.
pub fn grad_free_energy_ff(h: f64, v: f64, u: f64) -> Result<[f64; 2]> {
    if !(u > 0.0 && u < PI / 2.0) {
        return Err(Error::Domain(format!("spectral parameter {u} outside (0, π/2)")));
    }
    check_finite(h, v)?;
    let (tn, ct) = (u.tan(), 1.0 / u.tan());
    let arg = |a: f64, b: f64| ((b - a).sinh() * tn - (a + b).sinh() * ct) / (2.0 * a.cosh());
    let acos = |x: f64| -> Result<f64> {
        if x.abs() > 1.0 + 1e-12 || !x.is_finite() {
            return Err(Error::OutOfRange(format!("arccos argument {x} at (H, V) = ({h}, {v})")));
        }
        Ok(x.clamp(-1.0, 1.0).acos() / PI)
    };
    Ok([acos(arg(h, v))?, acos(arg(v, h))?])
}
