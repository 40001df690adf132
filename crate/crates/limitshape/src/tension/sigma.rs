use super::free_energy::{FreeEnergyField, grad_free_energy_ff};
use super::special::lobachevsky;
use crate::dimers::SpectralCurve;
use crate::{Error, Result};
use std::f64::consts::PI;
use std::fmt;

/// Distance from the boundary of the slope domain inside which tensions are not evaluated.
pub const SLOPE_INSET: f64 = 1e-6;

const NEWTON_TOL: f64 = 1e-13;
const NEWTON_MAX: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TensionVariant {
    HexClosed,
    FfClosed(f64),
    Quadratic,
    NumericLegendre,
}

impl fmt::Display for TensionVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TensionVariant::HexClosed => write!(f, "hex"),
            TensionVariant::FfClosed(u) => write!(f, "ff(u={u})"),
            TensionVariant::Quadratic => write!(f, "quadratic"),
            TensionVariant::NumericLegendre => write!(f, "numeric"),
        }
    }
}

/// A convex surface tension `σ(s, t)` on an open convex slope domain.
///
/// Limit shapes minimize `∫σ(∇h)`; `σ` is convex, so every solver in the crate minimizes.
pub trait SurfaceTension: Send + Sync {
    fn variant(&self) -> TensionVariant;
    /// Open slope domain, shrunk by [`SLOPE_INSET`] where it is bounded.
    fn contains(&self, s: f64, t: f64) -> bool;
    /// The open `s`-interval of the domain at fixed `t`.
    fn slice(&self, t: f64) -> Option<(f64, f64)>;
    /// Bounding box `[s_lo, s_hi] × [t_lo, t_hi]` of the domain.
    fn bounds(&self) -> [(f64, f64); 2];
    /// A point where `∇σ = 0`, or a central interior point.
    fn center(&self) -> (f64, f64);
    fn value(&self, s: f64, t: f64) -> Result<f64>;
    fn gradient(&self, s: f64, t: f64) -> Result<[f64; 2]>;
    fn hessian(&self, s: f64, t: f64) -> Result<[[f64; 2]; 2]>;
}

fn require(inside: bool, s: f64, t: f64) -> Result<()> {
    if inside && s.is_finite() && t.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfSlopeDomain(s, t))
    }
}

fn in_triangle(s: f64, t: f64) -> bool {
    s > 0.0 && t > 0.0 && s + t < 1.0
}

/// `σ_hex(s, t) = −(1/π)(L(πs) + L(πt) + L(π(1 − s − t)))` on the open triangle.
pub fn sigma_hex(s: f64, t: f64) -> Result<f64> {
    require(in_triangle(s, t), s, t)?;
    Ok(-(lobachevsky(PI * s) + lobachevsky(PI * t) + lobachevsky(PI * (1.0 - s - t))) / PI)
}

/// `(log(sin πs / sin πr), log(sin πt / sin πr))` with `r = 1 − s − t`.
pub fn grad_sigma_hex(s: f64, t: f64) -> Result<[f64; 2]> {
    require(in_triangle(s, t), s, t)?;
    let r = (PI * (1.0 - s - t)).sin().ln();
    Ok([(PI * s).sin().ln() - r, (PI * t).sin().ln() - r])
}

pub fn hess_sigma_hex(s: f64, t: f64) -> Result<[[f64; 2]; 2]> {
    require(in_triangle(s, t), s, t)?;
    let cot = |x: f64| 1.0 / (PI * x).tan();
    let r = cot(1.0 - s - t);
    Ok([[PI * (cot(s) + r), PI * r], [PI * r, PI * (cot(t) + r)]])
}

fn check_u(u: f64) -> Result<()> {
    if u > 0.0 && u < PI / 2.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("spectral parameter {u} outside (0, π/2)")))
    }
}

fn in_square(s: f64, t: f64) -> bool {
    s > 0.0 && s < 1.0 && t > 0.0 && t < 1.0
}

/// The inverse of the free-fermion gradient map:
/// `∂_sσ = −asinh((sin πt cos πs − cos 2u cos πt sin πs) / (sin 2u sin πs))` and its mirror.
pub fn grad_sigma_ff(s: f64, t: f64, u: f64) -> Result<[f64; 2]> {
    check_u(u)?;
    require(in_square(s, t), s, t)?;
    let (s2, c2) = (2.0 * u).sin_cos();
    let arg = |a: f64, b: f64| ((PI * b).sin() * (PI * a).cos() - c2 * (PI * b).cos() * (PI * a).sin()) / (s2 * (PI * a).sin());
    Ok([-arg(s, t).asinh(), -arg(t, s).asinh()])
}

pub fn hess_sigma_ff(s: f64, t: f64, u: f64) -> Result<[[f64; 2]; 2]> {
    check_u(u)?;
    require(in_square(s, t), s, t)?;
    let (s2, c2) = (2.0 * u).sin_cos();
    // ∂_a and ∂_b of −asinh(A(a, b)), A = (sin πb cot πa − cos 2u cos πb) / sin 2u
    let partials = |a: f64, b: f64| {
        let (sa, ca) = (PI * a).sin_cos();
        let (sb, cb) = (PI * b).sin_cos();
        let big_a = (sb * ca / sa - c2 * cb) / s2;
        let da = -PI * sb / (s2 * sa * sa);
        let db = PI * (cb * ca / sa + c2 * sb) / s2;
        let k = -1.0 / (1.0 + big_a * big_a).sqrt();
        (k * da, k * db)
    };
    let (ss, st) = partials(s, t);
    let (tt, ts) = partials(t, s);
    let m = 0.5 * (st + ts);
    Ok([[ss, m], [m, tt]])
}

/// Tension of the hexagonal dimer model.
#[derive(Debug, Clone, Copy, Default)]
pub struct HexTension;

impl SurfaceTension for HexTension {
    fn variant(&self) -> TensionVariant {
        TensionVariant::HexClosed
    }
    fn contains(&self, s: f64, t: f64) -> bool {
        s > SLOPE_INSET && t > SLOPE_INSET && s + t < 1.0 - SLOPE_INSET
    }
    fn slice(&self, t: f64) -> Option<(f64, f64)> {
        (t > 0.0 && t < 1.0).then_some((0.0, 1.0 - t))
    }
    fn bounds(&self) -> [(f64, f64); 2] {
        [(0.0, 1.0), (0.0, 1.0)]
    }
    fn center(&self) -> (f64, f64) {
        (1.0 / 3.0, 1.0 / 3.0)
    }
    fn value(&self, s: f64, t: f64) -> Result<f64> {
        sigma_hex(s, t)
    }
    fn gradient(&self, s: f64, t: f64) -> Result<[f64; 2]> {
        grad_sigma_hex(s, t)
    }
    fn hessian(&self, s: f64, t: f64) -> Result<[[f64; 2]; 2]> {
        hess_sigma_hex(s, t)
    }
}

/// Tension of the six-vertex model at `Δ = 0` with spectral parameter `u`. The gradient and
/// Hessian are closed-form; the value is `s H + t V − f(H, V)` at `(H, V) = ∇σ`.
#[derive(Debug, Clone)]
pub struct FreeFermionTension {
    u: f64,
    field: FreeEnergyField,
}

impl FreeFermionTension {
    pub fn new(u: f64) -> Result<Self> {
        check_u(u)?;
        Ok(Self { u, field: FreeEnergyField::new(SpectralCurve::free_fermion(u))? })
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn field(&self) -> &FreeEnergyField {
        &self.field
    }
}

impl SurfaceTension for FreeFermionTension {
    fn variant(&self) -> TensionVariant {
        TensionVariant::FfClosed(self.u)
    }
    fn contains(&self, s: f64, t: f64) -> bool {
        s > SLOPE_INSET && s < 1.0 - SLOPE_INSET && t > SLOPE_INSET && t < 1.0 - SLOPE_INSET
    }
    fn slice(&self, t: f64) -> Option<(f64, f64)> {
        (t > 0.0 && t < 1.0).then_some((0.0, 1.0))
    }
    fn bounds(&self) -> [(f64, f64); 2] {
        [(0.0, 1.0), (0.0, 1.0)]
    }
    fn center(&self) -> (f64, f64) {
        (0.5, 0.5)
    }
    fn value(&self, s: f64, t: f64) -> Result<f64> {
        let [h, v] = grad_sigma_ff(s, t, self.u)?;
        Ok(s * h + t * v - self.field.value(h, v)?)
    }
    fn gradient(&self, s: f64, t: f64) -> Result<[f64; 2]> {
        grad_sigma_ff(s, t, self.u)
    }
    fn hessian(&self, s: f64, t: f64) -> Result<[[f64; 2]; 2]> {
        hess_sigma_ff(s, t, self.u)
    }
}

/// `σ = ½(a s² + 2b s t + c t²)` on the whole plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticTension {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl QuadraticTension {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a > 0.0 && a * c - b * b > 0.0) {
            return Err(Error::Domain(format!("quadratic form ({a}, {b}, {c}) is not positive definite")));
        }
        Ok(Self { a, b, c })
    }
}

impl SurfaceTension for QuadraticTension {
    fn variant(&self) -> TensionVariant {
        TensionVariant::Quadratic
    }
    fn contains(&self, s: f64, t: f64) -> bool {
        s.is_finite() && t.is_finite()
    }
    fn slice(&self, t: f64) -> Option<(f64, f64)> {
        t.is_finite().then_some((f64::NEG_INFINITY, f64::INFINITY))
    }
    fn bounds(&self) -> [(f64, f64); 2] {
        [(f64::NEG_INFINITY, f64::INFINITY); 2]
    }
    fn center(&self) -> (f64, f64) {
        (0.0, 0.0)
    }
    fn value(&self, s: f64, t: f64) -> Result<f64> {
        require(self.contains(s, t), s, t)?;
        Ok(0.5 * (self.a * s * s + 2.0 * self.b * s * t + self.c * t * t))
    }
    fn gradient(&self, s: f64, t: f64) -> Result<[f64; 2]> {
        require(self.contains(s, t), s, t)?;
        Ok([self.a * s + self.b * t, self.b * s + self.c * t])
    }
    fn hessian(&self, _s: f64, _t: f64) -> Result<[[f64; 2]; 2]> {
        Ok([[self.a, self.b], [self.b, self.c]])
    }
}

/// Convex hull of the exponents of a curve; the slope domain of its tension.
#[derive(Debug, Clone, PartialEq)]
pub struct NewtonPolygon {
    /// Vertices in counter-clockwise order.
    pub vertices: Vec<(f64, f64)>,
}

impl NewtonPolygon {
    pub fn of(curve: &SpectralCurve) -> Self {
        let mut pts: Vec<(i32, i32)> = curve.terms().map(|(e, _)| e).collect();
        pts.sort();
        pts.dedup();
        let cross = |o: (i32, i32), a: (i32, i32), b: (i32, i32)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
        let mut hull: Vec<(i32, i32)> = Vec::new();
        for pass in 0..2 {
            let start = hull.len();
            let iter: Box<dyn Iterator<Item = &(i32, i32)>> = if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
            for &p in iter {
                while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
                    hull.pop();
                }
                hull.push(p);
            }
            hull.pop();
        }
        Self { vertices: hull.into_iter().map(|(i, j)| (i as f64, j as f64)).collect() }
    }

    pub fn area(&self) -> f64 {
        let n = self.vertices.len();
        (0..n)
            .map(|k| {
                let (a, b) = (self.vertices[k], self.vertices[(k + 1) % n]);
                a.0 * b.1 - a.1 * b.0
            })
            .sum::<f64>()
            / 2.0
    }

    /// Strict containment with margin `eps` from every edge.
    pub fn contains(&self, s: f64, t: f64, eps: f64) -> bool {
        let n = self.vertices.len();
        n >= 3
            && (0..n).all(|k| {
                let (a, b) = (self.vertices[k], self.vertices[(k + 1) % n]);
                let (ex, ey) = (b.0 - a.0, b.1 - a.1);
                (ex * (t - a.1) - ey * (s - a.0)) / ex.hypot(ey) > eps
            })
    }

    pub fn slice(&self, t: f64) -> Option<(f64, f64)> {
        let n = self.vertices.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for k in 0..n {
            let (a, b) = (self.vertices[k], self.vertices[(k + 1) % n]);
            if (a.1 - t) * (b.1 - t) <= 0.0 && a.1 != b.1 {
                let x = a.0 + (t - a.1) / (b.1 - a.1) * (b.0 - a.0);
                lo = lo.min(x);
                hi = hi.max(x);
            }
        }
        (lo < hi).then_some((lo, hi))
    }

    pub fn centroid(&self) -> (f64, f64) {
        let n = self.vertices.len() as f64;
        let (sx, sy) = self.vertices.iter().fold((0.0, 0.0), |acc, p| (acc.0 + p.0, acc.1 + p.1));
        (sx / n, sy / n)
    }
}

/// Result of a numerical Legendre transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LegendreResult {
    pub sigma: f64,
    /// The maximizer `(H*, V*)`, equal to `∇σ(s, t)`.
    pub field: [f64; 2],
    pub iterations: usize,
}

fn solve2(m: [[f64; 2]; 2], r: [f64; 2]) -> Option<[f64; 2]> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if !(det.abs() > 1e-300) || !det.is_finite() {
        return None;
    }
    Some([(r[0] * m[1][1] - r[1] * m[0][1]) / det, (m[0][0] * r[1] - m[1][0] * r[0]) / det])
}

fn inv2(m: [[f64; 2]; 2]) -> Option<[[f64; 2]; 2]> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if !(det.abs() > 1e-300) || !det.is_finite() {
        return None;
    }
    Some([[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]])
}

/// `σ(s, t) = max_{H,V} (sH + tV − f(H, V))` by damped Newton on `∇f = (s, t)` from `start`.
pub fn legendre_sigma_from(f: &FreeEnergyField, s: f64, t: f64, start: [f64; 2]) -> Result<LegendreResult> {
    let poly = NewtonPolygon::of(f.curve());
    if !poly.contains(s, t, SLOPE_INSET) {
        return Err(Error::OutOfSlopeDomain(s, t));
    }
    let residual = |x: [f64; 2]| -> Result<([f64; 2], f64)> {
        let g = f.gradient(x[0], x[1])?;
        let r = [g[0] - s, g[1] - t];
        Ok((r, r[0].abs().max(r[1].abs())))
    };
    let objective = |x: [f64; 2]| -> Result<f64> { Ok(f.value(x[0], x[1])? - s * x[0] - t * x[1]) };
    let mut x = start;
    let (mut r, mut norm) = residual(x)?;
    let mut phi = objective(x)?;
    for it in 0..NEWTON_MAX {
        if norm < NEWTON_TOL {
            return Ok(LegendreResult { sigma: -objective(x)?, field: x, iterations: it });
        }
        let hess = f.hessian(x[0], x[1])?;
        let dir = match solve2(hess, r) {
            Some(d) if -(d[0] * r[0] + d[1] * r[1]) < 0.0 => [-d[0], -d[1]],
            _ => [-r[0], -r[1]],
        };
        let slope = dir[0] * r[0] + dir[1] * r[1];
        let mut step = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let y = [x[0] + step * dir[0], x[1] + step * dir[1]];
            let (ry, ny) = residual(y)?;
            // the objective stops resolving progress once the residual is small
            let ok = if norm < 1e-7 {
                ny < norm
            } else {
                let py = objective(y)?;
                py <= phi + 1e-4 * step * slope
            };
            if ok {
                x = y;
                r = ry;
                norm = ny;
                phi = objective(x)?;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if norm < 1e-10 {
        return Ok(LegendreResult { sigma: -objective(x)?, field: x, iterations: NEWTON_MAX });
    }
    Err(Error::NonConvergence { iterations: NEWTON_MAX, residual: norm })
}

/// [`legendre_sigma_from`] started at `H = V = 0`.
pub fn legendre_sigma(f: &FreeEnergyField, s: f64, t: f64) -> Result<LegendreResult> {
    legendre_sigma_from(f, s, t, [0.0, 0.0])
}

/// `max_{s,t} (sH + tV − σ(s, t))`, recovering the free energy from a tension.
pub fn legendre_conjugate(sigma: &dyn SurfaceTension, h: f64, v: f64) -> Result<(f64, [f64; 2])> {
    let (mut s, mut t) = sigma.center();
    for it in 0..NEWTON_MAX {
        let g = sigma.gradient(s, t)?;
        let r = [g[0] - h, g[1] - v];
        let norm = r[0].abs().max(r[1].abs());
        if norm < 1e-12 || (it + 1 == NEWTON_MAX && norm < 1e-9) {
            return Ok((s * h + t * v - sigma.value(s, t)?, [s, t]));
        }
        let d = solve2(sigma.hessian(s, t)?, r).ok_or(Error::NonConvergence { iterations: it, residual: norm })?;
        let mut step = 1.0;
        while !sigma.contains(s - step * d[0], t - step * d[1]) {
            step *= 0.5;
            if step < 1e-20 {
                return Err(Error::NonConvergence { iterations: it, residual: norm });
            }
        }
        if step < 1.0 {
            step *= 0.9;
        }
        s -= step * d[0];
        t -= step * d[1];
    }
    Err(Error::NonConvergence { iterations: NEWTON_MAX, residual: f64::NAN })
}

/// Tension of an arbitrary spectral curve by numerical Legendre transform of its free energy.
#[derive(Debug, Clone)]
pub struct NumericTension {
    field: FreeEnergyField,
    polygon: NewtonPolygon,
}

impl NumericTension {
    pub fn new(curve: SpectralCurve) -> Result<Self> {
        let polygon = NewtonPolygon::of(&curve);
        if !(polygon.area() > 0.0) {
            return Err(Error::Domain("Newton polygon has empty interior".into()));
        }
        Ok(Self { field: FreeEnergyField::new(curve)?, polygon })
    }

    pub fn field(&self) -> &FreeEnergyField {
        &self.field
    }

    pub fn polygon(&self) -> &NewtonPolygon {
        &self.polygon
    }

    pub fn solve(&self, s: f64, t: f64) -> Result<LegendreResult> {
        legendre_sigma(&self.field, s, t)
    }
}

impl SurfaceTension for NumericTension {
    fn variant(&self) -> TensionVariant {
        TensionVariant::NumericLegendre
    }
    fn contains(&self, s: f64, t: f64) -> bool {
        self.polygon.contains(s, t, SLOPE_INSET)
    }
    fn slice(&self, t: f64) -> Option<(f64, f64)> {
        self.polygon.slice(t)
    }
    fn bounds(&self) -> [(f64, f64); 2] {
        let v = &self.polygon.vertices;
        let r = |k: fn(&(f64, f64)) -> f64| (v.iter().map(k).fold(f64::INFINITY, f64::min), v.iter().map(k).fold(f64::NEG_INFINITY, f64::max));
        [r(|p| p.0), r(|p| p.1)]
    }
    fn center(&self) -> (f64, f64) {
        self.polygon.centroid()
    }
    fn value(&self, s: f64, t: f64) -> Result<f64> {
        Ok(self.solve(s, t)?.sigma)
    }
    fn gradient(&self, s: f64, t: f64) -> Result<[f64; 2]> {
        Ok(self.solve(s, t)?.field)
    }
    fn hessian(&self, s: f64, t: f64) -> Result<[[f64; 2]; 2]> {
        let x = self.solve(s, t)?.field;
        let hf = self.field.hessian(x[0], x[1])?;
        inv2(hf).ok_or(Error::NonConvergence { iterations: 0, residual: 0.0 })
    }
}

/// Free-fermion free-energy gradient followed by the closed-form tension gradient.
pub fn ff_round_trip(s: f64, t: f64, u: f64) -> Result<[f64; 2]> {
    let [h, v] = grad_sigma_ff(s, t, u)?;
    grad_free_energy_ff(h, v, u)
}
