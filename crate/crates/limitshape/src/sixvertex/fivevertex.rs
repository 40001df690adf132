use super::rmatrix::RMatrix4;
use super::weights::Regime;
use crate::{Error, Result};

/// The three ways of sending one weight of the six-vertex model to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiveVertexCase {
    /// `b² > c²`: hyperbolic weights with `u = γ + ξ`, fields `γ/2 + l`, `γ/2 + m`, `γ → ∞`.
    One,
    /// `b² = c²`: trigonometric weights with fields `−½ log(γ − u) + l`, `… + m`, `γ → u`.
    Two,
    /// `b² < c²`: hyperbolic weights with `u = γ − ξ`, fields `γ/2 + l`, `γ/2 + m`, `γ → ∞`.
    Three,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiveVertexParams {
    pub l: f64,
    pub m: f64,
    /// Offset of `u` from `γ` (cases one and three).
    pub xi: f64,
    /// Spectral parameter (case two).
    pub u: f64,
    /// Overall scale (case two).
    pub r: f64,
}

impl Default for FiveVertexParams {
    fn default() -> Self {
        Self { l: 0.0, m: 0.0, xi: 0.5, u: 0.5, r: 1.0 }
    }
}

fn check(case: FiveVertexCase, p: &FiveVertexParams) -> Result<()> {
    let ok = match case {
        FiveVertexCase::One | FiveVertexCase::Three => p.xi > 0.0 && p.xi.is_finite(),
        FiveVertexCase::Two => p.u > 0.0 && p.u < std::f64::consts::FRAC_PI_2 && p.r > 0.0,
    };
    if ok && p.l.is_finite() && p.m.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("five-vertex parameters {p:?} outside the {case:?} window")))
    }
}

/// Limiting R-matrix, up to an overall constant.
pub fn five_vertex_limit_r(case: FiveVertexCase, p: &FiveVertexParams) -> Result<RMatrix4> {
    check(case, p)?;
    let (l, m, xi) = (p.l, p.m, p.xi);
    let mut r = [[0.0; 4]; 4];
    match case {
        FiveVertexCase::One => {
            r[0][0] = 2.0 * xi.sinh() * (l + m).exp();
            r[1][1] = (xi + l - m).exp();
            r[2][2] = (xi - l + m).exp();
            r[1][2] = 1.0;
            r[2][1] = 1.0;
        }
        FiveVertexCase::Two => {
            let s = p.u.sin();
            r[0][0] = p.r * (l + m).exp();
            r[1][1] = p.r * s * (l - m).exp();
            r[2][2] = p.r * s * (m - l).exp();
            r[1][2] = p.r * s;
            r[2][1] = p.r * s;
        }
        FiveVertexCase::Three => {
            r[0][0] = 2.0 * xi.sinh() * (l + m).exp();
            r[1][1] = (-xi + l - m).exp();
            r[2][2] = (-xi - l + m).exp();
            r[1][2] = 1.0;
            r[2][1] = 1.0;
        }
    }
    Ok(RMatrix4 { m: r })
}

/// Six-vertex R-matrix at finite `gamma` with the case's substitution.
pub fn five_vertex_finite_r(case: FiveVertexCase, p: &FiveVertexParams, gamma: f64) -> Result<RMatrix4> {
    check(case, p)?;
    let (regime, u, h, v, scale) = match case {
        FiveVertexCase::One => (Regime::A2, gamma + p.xi, gamma / 2.0 + p.l, gamma / 2.0 + p.m, 1.0),
        FiveVertexCase::Three => {
            if p.xi >= gamma {
                return Err(Error::OutOfRange(format!("case three needs xi < gamma, got {} >= {gamma}", p.xi)));
            }
            (Regime::C, gamma - p.xi, gamma / 2.0 + p.l, gamma / 2.0 + p.m, 1.0)
        }
        FiveVertexCase::Two => {
            if !(gamma > p.u && gamma < std::f64::consts::FRAC_PI_2) {
                return Err(Error::OutOfRange(format!("case two needs u < gamma < pi/2, got gamma = {gamma}")));
            }
            let f = -0.5 * (gamma - p.u).ln();
            (Regime::B2, p.u, f + p.l, f + p.m, p.r)
        }
    };
    let (a, b, c) = regime.abc(u, gamma);
    Ok(RMatrix4::from_raw(scale * a, scale * b, scale * c, h, v))
}

/// Entrywise distance between the finite and limiting matrices after dividing each by its
/// largest-magnitude entry.
pub fn convergence_gap(case: FiveVertexCase, p: &FiveVertexParams, gamma: f64) -> Result<f64> {
    let finite = five_vertex_finite_r(case, p, gamma)?.normalized();
    let limit = five_vertex_limit_r(case, p)?.normalized();
    Ok(finite.max_abs_diff(&limit))
}
