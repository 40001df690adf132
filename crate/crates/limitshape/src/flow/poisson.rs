use super::hamilton::HamiltonianDensity;
use crate::tension::SurfaceTension;
use crate::{Error, Result};

/// A uniform `n × n` grid on `[p_lo, p_hi] × [ξ_lo, ξ_hi]`; derivatives use the fourth-order
/// central stencil with step `step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonGrid {
    pub p: (f64, f64),
    pub xi: (f64, f64),
    pub n: usize,
    pub step: f64,
}

impl PoissonGrid {
    pub fn new(p: (f64, f64), xi: (f64, f64), n: usize) -> Self {
        Self { p, xi, n, step: 1e-3 }
    }

    fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let at = |(a, b): (f64, f64), k: usize| if self.n == 1 { 0.5 * (a + b) } else { a + (b - a) * k as f64 / (self.n - 1) as f64 };
        (0..self.n).flat_map(move |i| (0..self.n).map(move |j| (at(self.p, i), at(self.xi, j))))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonResidual {
    /// `sup |∂₂A − ∂₁B|`.
    pub residual: f64,
    /// `sup |∂₁²τ_u ∂₁²τ_v (det Hess σ_u − det Hess σ_v)|`.
    pub factored: f64,
    /// `sup |(∂₂A − ∂₁B) − ∂₁²τ_u ∂₁²τ_v (det Hess σ_u − det Hess σ_v)|`.
    pub factorization_gap: f64,
}

/// The integrability defect of the bracket density of `H_u` and `H_v` with
/// `A = ∂₁²τ_u ∂₂τ_v − ∂₁²τ_v ∂₂τ_u` and `B = ∂₁∂₂τ_u ∂₂τ_v − ∂₁∂₂τ_v ∂₂τ_u`.
pub fn poisson_bracket_residual(su: &dyn SurfaceTension, sv: &dyn SurfaceTension, grid: &PoissonGrid) -> Result<PoissonResidual> {
    if grid.n == 0 || !(grid.step > 0.0) {
        return Err(Error::Domain("empty grid or non-positive step".into()));
    }
    let (tu, tv) = (HamiltonianDensity::new(su), HamiltonianDensity::new(sv));
    let ab = |p: f64, xi: f64| -> Result<(f64, f64)> {
        let (a, b) = (tu.eval(p, xi)?, tv.eval(p, xi)?);
        Ok((a.d11 * b.d2 - b.d11 * a.d2, a.d12 * b.d2 - b.d12 * a.d2))
    };
    let h = grid.step;
    let mut out = PoissonResidual { residual: 0.0, factored: 0.0, factorization_gap: 0.0 };
    for (p, xi) in grid.points() {
        let d2a = (8.0 * (ab(p, xi + h)?.0 - ab(p, xi - h)?.0) - ab(p, xi + 2.0 * h)?.0 + ab(p, xi - 2.0 * h)?.0) / (12.0 * h);
        let d1b = (8.0 * (ab(p + h, xi)?.1 - ab(p - h, xi)?.1) - ab(p + 2.0 * h, xi)?.1 + ab(p - 2.0 * h, xi)?.1) / (12.0 * h);
        let r = d2a - d1b;
        let (a, b) = (tu.eval(p, xi)?, tv.eval(p, xi)?);
        let f = a.d11 * b.d11 * (a.sigma_det - b.sigma_det);
        out.residual = out.residual.max(r.abs());
        out.factored = out.factored.max(f.abs());
        out.factorization_gap = out.factorization_gap.max((r - f).abs());
    }
    Ok(out)
}
