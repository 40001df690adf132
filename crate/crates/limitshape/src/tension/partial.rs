use super::sigma::{hess_sigma_ff, SurfaceTension, SLOPE_INSET};
use crate::{Error, Result};

/// `τ(p, ξ) = max_ν (pν − σ(ν, ξ))` with its maximizer and partial derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartialLegendre {
    pub tau: f64,
    /// The maximizer `ν*`, solving `∂₁σ(ν*, ξ) = p`.
    pub nu: f64,
    pub d1: f64,
    pub d2: f64,
    pub d11: f64,
    pub d12: f64,
    pub d22: f64,
    /// `∂₁²σ(ν*, ξ)` and `det Hess σ(ν*, ξ)`.
    pub sigma11: f64,
    pub sigma_det: f64,
}

impl PartialLegendre {
    /// `|∂₁²τ · ∂₁²σ − 1|`.
    pub fn inverse_residual(&self) -> f64 {
        (self.d11 * self.sigma11 - 1.0).abs()
    }

    /// `|∂₂²τ / ∂₁²τ + det Hess σ|`.
    pub fn hessian_residual(&self) -> f64 {
        (self.d22 / self.d11 + self.sigma_det).abs()
    }
}

fn solve_slice(sigma: &dyn SurfaceTension, p: f64, xi: f64) -> Result<f64> {
    let (lo, hi) = sigma.slice(xi).ok_or(Error::OutOfSlopeDomain(f64::NAN, xi))?;
    let phi = |nu: f64| sigma.gradient(nu, xi).map(|g| g[0] - p);
    let unbounded = || Error::Unbounded(format!("p = {p} outside the range of ∂₁σ at ξ = {xi}"));
    let (mut a, mut b);
    if lo.is_finite() && hi.is_finite() {
        let eps = SLOPE_INSET * (hi - lo).max(1.0);
        a = lo + eps;
        b = hi - eps;
        if a >= b {
            return Err(Error::OutOfSlopeDomain(0.5 * (lo + hi), xi));
        }
        if phi(a)? > 0.0 || phi(b)? < 0.0 {
            return Err(unbounded());
        }
    } else {
        let c = sigma.center().0;
        let mut w = 1.0;
        a = c - w;
        b = c + w;
        while phi(a)? > 0.0 || phi(b)? < 0.0 {
            w *= 2.0;
            if w > 1e12 {
                return Err(unbounded());
            }
            a = (c - w).max(lo);
            b = (c + w).min(hi);
        }
    }
    let mut nu = 0.5 * (a + b);
    for _ in 0..200 {
        let f = phi(nu)?;
        if f == 0.0 {
            return Ok(nu);
        }
        if f < 0.0 {
            a = nu;
        } else {
            b = nu;
        }
        let d = sigma.hessian(nu, xi)?[0][0];
        let newton = nu - f / d;
        let next = if newton > a && newton < b && d > 0.0 { newton } else { 0.5 * (a + b) };
        if (next - nu).abs() <= 1e-15 * (1.0 + nu.abs()) || b - a <= 1e-15 * (1.0 + nu.abs()) {
            return Ok(next);
        }
        nu = next;
    }
    Err(Error::NonConvergence { iterations: 200, residual: phi(nu)?.abs() })
}

/// The partial Legendre transform of `sigma` in its first slope at `(p, ξ)`.
///
/// Second partials: `∂₁²τ = 1/σ₁₁`, `∂₁∂₂τ = −σ₁₂/σ₁₁`, `∂₂²τ = −det Hess σ / σ₁₁`.
pub fn partial_legendre(sigma: &dyn SurfaceTension, p: f64, xi: f64) -> Result<PartialLegendre> {
    if !(p.is_finite() && xi.is_finite()) {
        return Err(Error::Domain(format!("non-finite arguments ({p}, {xi})")));
    }
    let nu = solve_slice(sigma, p, xi)?;
    let g = sigma.gradient(nu, xi)?;
    let h = sigma.hessian(nu, xi)?;
    let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
    Ok(PartialLegendre {
        tau: p * nu - sigma.value(nu, xi)?,
        nu,
        d1: nu,
        d2: -g[1],
        d11: 1.0 / h[0][0],
        d12: -h[0][1] / h[0][0],
        d22: -det / h[0][0],
        sigma11: h[0][0],
        sigma_det: det,
    })
}

/// `max |det Hess σ_u(s, t) − det Hess σ_{u'}(s, t)|` over pairs from `us`, using the
/// closed-form free-fermion Hessian.
pub fn hess_spectral_independence(s: f64, t: f64, us: &[f64]) -> Result<f64> {
    let dets = us
        .iter()
        .map(|&u| hess_sigma_ff(s, t, u).map(|h| h[0][0] * h[1][1] - h[0][1] * h[1][0]))
        .collect::<Result<Vec<f64>>>()?;
    let hi = dets.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = dets.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(if dets.is_empty() { 0.0 } else { hi - lo })
}

/// `det Hess σ` of any tension.
pub fn hessian_determinant(sigma: &dyn SurfaceTension, s: f64, t: f64) -> Result<f64> {
    let h = sigma.hessian(s, t)?;
    Ok(h[0][0] * h[1][1] - h[0][1] * h[1][0])
}
