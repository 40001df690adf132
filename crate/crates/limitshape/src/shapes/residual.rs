use super::grid::HeightField;
use crate::tension::{SurfaceTension, SLOPE_INSET};
use crate::{Error, Result};
use std::f64::consts::PI;

/// Values at the interior nodes `1 ≤ i ≤ nx − 2`, all `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct InteriorField {
    pub nx: usize,
    pub ny: usize,
    /// `values[(i − 1) * ny + j]`.
    pub values: Vec<f64>,
}

impl InteriorField {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[(i - 1) * self.ny + j]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest `|value|` over nodes where `mask` (indexed like the grid) is false.
    pub fn max_abs_excluding(&self, mask: &[bool]) -> f64 {
        let mut m = 0.0f64;
        for i in 1..self.nx - 1 {
            for j in 0..self.ny {
                if !mask[i * self.ny + j] {
                    m = m.max(self.get(i, j).abs());
                }
            }
        }
        m
    }
}

/// Centered first and second differences at an interior node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Derivatives {
    pub hx: f64,
    pub hy: f64,
    pub hxx: f64,
    pub hxy: f64,
    pub hyy: f64,
}

pub fn derivatives(hf: &HeightField, i: usize, j: usize) -> Derivatives {
    let (dx, dy) = (hf.grid.hx(), hf.grid.hy());
    let j = j as isize;
    let h = |a: usize, b: isize| hf.at(a, b);
    Derivatives {
        hx: (h(i + 1, j) - h(i - 1, j)) / (2.0 * dx),
        hy: (h(i, j + 1) - h(i, j - 1)) / (2.0 * dy),
        hxx: (h(i + 1, j) - 2.0 * h(i, j) + h(i - 1, j)) / (dx * dx),
        hyy: (h(i, j + 1) - 2.0 * h(i, j) + h(i, j - 1)) / (dy * dy),
        hxy: (h(i + 1, j + 1) - h(i + 1, j - 1) - h(i - 1, j + 1) + h(i - 1, j - 1)) / (4.0 * dx * dy),
    }
}

fn interior(hf: &HeightField, mut f: impl FnMut(Derivatives) -> Result<f64>) -> Result<InteriorField> {
    let (nx, ny) = (hf.grid.nx, hf.grid.ny);
    let mut values = Vec::with_capacity((nx - 2) * ny);
    for i in 1..nx - 1 {
        for j in 0..ny {
            values.push(f(derivatives(hf, i, j))?);
        }
    }
    Ok(InteriorField { nx, ny, values })
}

/// `σ₁₁ h_xx + 2σ₁₂ h_xy + σ₂₂ h_yy` with the Hessian of `σ` at the centered slope.
pub fn el_residual(hf: &HeightField, sigma: &dyn SurfaceTension) -> Result<InteriorField> {
    interior(hf, |d| {
        if !sigma.contains(d.hx, d.hy) {
            return Err(Error::OutOfSlopeDomain(d.hx, d.hy));
        }
        let h = sigma.hessian(d.hx, d.hy)?;
        Ok(h[0][0] * d.hxx + 2.0 * h[0][1] * d.hxy + h[1][1] * d.hyy)
    })
}

/// The hexagonal form `h_xx sin πh_y / sin πh_x − 2 h_xy cos π(h_x + h_y) + h_yy sin πh_x / sin πh_y`,
/// equal to `sin(π(1 − h_x − h_y))/π` times [`el_residual`] with the hexagonal tension.
pub fn hex_el_residual(hf: &HeightField) -> Result<InteriorField> {
    interior(hf, |d| {
        let (s, t) = (d.hx, d.hy);
        if !(s > 0.0 && t > 0.0 && s + t < 1.0) {
            return Err(Error::OutOfSlopeDomain(s, t));
        }
        let (ss, st) = ((PI * s).sin(), (PI * t).sin());
        Ok(d.hxx * st / ss - 2.0 * d.hxy * (PI * (s + t)).cos() + d.hyy * ss / st)
    })
}

/// The free-fermion form
/// `h_xx sin πh_y / sin πh_x − 2 (cos πh_x cos πh_y + cos 2u sin πh_x sin πh_y) h_xy + h_yy sin πh_x / sin πh_y`.
pub fn ff_el_residual(hf: &HeightField, u: f64) -> Result<InteriorField> {
    if !(u > 0.0 && u < PI / 2.0) {
        return Err(Error::Domain(format!("spectral parameter {u} outside (0, π/2)")));
    }
    let c2 = (2.0 * u).cos();
    interior(hf, |d| {
        let (s, t) = (d.hx, d.hy);
        if !(s > 0.0 && s < 1.0 && t > 0.0 && t < 1.0) {
            return Err(Error::OutOfSlopeDomain(s, t));
        }
        let ((ss, cs), (st, ct)) = ((PI * s).sin_cos(), (PI * t).sin_cos());
        Ok(d.hxx * st / ss - 2.0 * (cs * ct + c2 * ss * st) * d.hxy + d.hyy * ss / st)
    })
}

/// The factor `N/π` with `ff_el_residual = (N/π) · el_residual(σ_FF)`, where
/// `N² = sin²πs + sin²πt − (1 + cos²2u) sin²πs sin²πt − 2 cos 2u sin πs cos πs sin πt cos πt`.
pub fn ff_el_normalization(s: f64, t: f64, u: f64) -> f64 {
    let c2 = (2.0 * u).cos();
    let ((ss, cs), (st, ct)) = ((PI * s).sin_cos(), (PI * t).sin_cos());
    let n2 = ss * ss + st * st - (1.0 + c2 * c2) * ss * ss * st * st - 2.0 * c2 * ss * cs * st * ct;
    n2.max(0.0).sqrt() / PI
}

/// Nodes next to a triangle whose slope is within `margin` of the edge of the tension's
/// domain. These are facet nodes, where the Euler–Lagrange equation need not hold.
pub fn facet_mask(hf: &HeightField, sigma: &dyn SurfaceTension, margin: f64) -> Vec<bool> {
    let g = hf.grid;
    let m = margin.max(SLOPE_INSET);
    let mut mask = vec![false; g.nodes()];
    let tris = super::grid::triangles(&g);
    for tri in &tris {
        let (s, t) = hf.slope(tri);
        let near = [(m, 0.0), (-m, 0.0), (0.0, m), (0.0, -m)].iter().any(|&(a, b)| !sigma.contains(s + a, t + b));
        if near {
            for n in [tri.s_plus, tri.s_minus, tri.t_plus, tri.t_minus] {
                mask[n] = true;
            }
        }
    }
    mask
}
