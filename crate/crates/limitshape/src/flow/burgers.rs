use super::hamilton::{FlowOptions, HamiltonianDensity};
use super::state::{FlowState, Spectral};
use crate::dimers::SpectralCurve;
use crate::shapes::{CylinderGrid, HeightField};
use crate::tension::free_energy::polynomial_roots;
use crate::tension::quadrature::integrate;
use crate::{Error, Result};
use num_complex::Complex64;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum BurgersKind {
    Hex,
    FreeFermion(f64),
    /// Solved from a spectral curve on the branch through `(z₀, w₀)`.
    FromCurve { curve: SpectralCurve, z0: Complex64, w0: Complex64 },
}

/// `F(z) = (z/w) ∂_zP / ∂_wP` on a branch `w(z)` of `P(z, w) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct BurgersFunction {
    pub kind: BurgersKind,
}

impl fmt::Display for BurgersFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            BurgersKind::Hex => write!(f, "hex"),
            BurgersKind::FreeFermion(u) => write!(f, "ff(u={u})"),
            BurgersKind::FromCurve { curve, .. } => write!(f, "curve({curve})"),
        }
    }
}

const CONTINUATION_STEPS: usize = 16;

fn w_roots(curve: &SpectralCurve, z: Complex64) -> Vec<Complex64> {
    let (lo, hi) = curve.w_range();
    let mut a = vec![Complex64::new(0.0, 0.0); (hi - lo + 1) as usize];
    for ((i, j), c) in curve.terms() {
        a[(j - lo) as usize] += c * z.powi(i);
    }
    while a.len() > 1 && a.last().is_some_and(|c| c.norm() == 0.0) {
        a.pop();
    }
    match a.len() {
        0 | 1 => vec![],
        2 => vec![-a[0] / a[1]],
        _ => polynomial_roots(&a),
    }
    .into_iter()
    .filter(|w| w.norm() > 0.0)
    .collect()
}

fn nearest(roots: &[Complex64], target: Complex64) -> Result<Complex64> {
    let mut sorted: Vec<(f64, Complex64)> = roots.iter().map(|&w| ((w - target).norm(), w)).collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    match sorted.as_slice() {
        [] => Err(Error::Domain("curve has no finite nonzero branch in w".into())),
        [(_, w)] => Ok(*w),
        [(d0, w), (d1, _), ..] => {
            if d1 - d0 < 1e-10 * (1.0 + w.norm()) {
                Err(Error::Inconsistent(format!("branch through w = {target} is ambiguous")))
            } else {
                Ok(*w)
            }
        }
    }
}

impl BurgersFunction {
    pub fn hex() -> Self {
        Self { kind: BurgersKind::Hex }
    }

    pub fn free_fermion(u: f64) -> Result<Self> {
        if !(u > 0.0 && u < std::f64::consts::FRAC_PI_2) {
            return Err(Error::Domain(format!("spectral parameter {u} outside (0, π/2)")));
        }
        Ok(Self { kind: BurgersKind::FreeFermion(u) })
    }

    fn branch(&self, z: Complex64) -> Result<Option<(SpectralCurve, Complex64)>> {
        let BurgersKind::FromCurve { curve, z0, w0 } = &self.kind else { return Ok(None) };
        let (lo, hi) = curve.w_range();
        let mut w = *w0;
        if hi - lo > 1 {
            for k in 1..=CONTINUATION_STEPS {
                let zk = z0 + (z - z0) * (k as f64 / CONTINUATION_STEPS as f64);
                w = nearest(&w_roots(curve, zk), w)?;
            }
        } else {
            w = nearest(&w_roots(curve, z), w)?;
        }
        Ok(Some((curve.clone(), w)))
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        match &self.kind {
            BurgersKind::Hex => Ok(z / (1.0 - z)),
            BurgersKind::FreeFermion(u) => {
                let (s, c) = u.sin_cos();
                Ok(-z / ((z * c + s) * (z * s - c)))
            }
            BurgersKind::FromCurve { .. } => {
                let (curve, w) = self.branch(z)?.expect("curve branch");
                let (gz, gw) = curve.log_gradient(z, w);
                if gw.norm() < 1e-12 * (1.0 + gz.norm()) {
                    return Err(Error::SingularLocus);
                }
                Ok(gz / gw)
            }
        }
    }

    /// `dF/dz`.
    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        match &self.kind {
            BurgersKind::Hex => Ok(1.0 / ((1.0 - z) * (1.0 - z))),
            BurgersKind::FreeFermion(u) => {
                let (s, c) = u.sin_cos();
                let d = (z * c + s) * (z * s - c);
                Ok(c * s * (z * z + 1.0) / (d * d))
            }
            BurgersKind::FromCurve { .. } => {
                let h = 1e-6 * (1.0 + z.norm());
                Ok((self.eval(z + h)? - self.eval(z - h)?) / (2.0 * h))
            }
        }
    }
}

/// The Burgers function of a curve on the branch through `(z₀, w₀)`, which must lie on the
/// curve.
pub fn burgers_from_curve(curve: &SpectralCurve, z0: Complex64, w0: Complex64) -> Result<BurgersFunction> {
    let r = curve.eval(z0, w0).norm();
    let (gz, gw) = curve.log_gradient(z0, w0);
    if r > 1e-8 * (1.0 + gz.norm() + gw.norm()) {
        return Err(Error::Inconsistent(format!("probe ({z0}, {w0}) is off the curve by {r:e}")));
    }
    if gw.norm() < 1e-12 * (1.0 + gz.norm()) {
        return Err(Error::SingularLocus);
    }
    nearest(&w_roots(curve, z0), w0)?;
    Ok(BurgersFunction { kind: BurgersKind::FromCurve { curve: curve.clone(), z0, w0 } })
}

/// Orientation of the characteristics: `∂_x l = ±F(eˡ) ∂_y l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CharacteristicSign {
    #[default]
    Plus,
    Minus,
}

impl CharacteristicSign {
    fn factor(self) -> f64 {
        match self {
            Self::Plus => 1.0,
            Self::Minus => -1.0,
        }
    }
}

/// Characteristic solution of `∂_x l = ±F(eˡ) ∂_y l` from periodic initial samples.
///
/// The initial profile is continued to complex `y` through its Fourier series, and
/// `l(x, y) = l₀(y ± x F(e^{l(x, y)}))` is solved pointwise by Newton's method.
pub struct BurgersSolver {
    pub circumference: f64,
    pub ny: usize,
    pub function: BurgersFunction,
    pub sign: CharacteristicSign,
    pub opts: FlowOptions,
    modes: Vec<(f64, Complex64)>,
}

const NEWTON_MAX: usize = 60;
const MAX_SUBSTEP: f64 = 0.01;

impl BurgersSolver {
    pub fn new(l0: &[Complex64], circumference: f64, function: BurgersFunction) -> Result<Self> {
        Self::with(l0, circumference, function, CharacteristicSign::Plus, FlowOptions::default())
    }

    pub fn with(
        l0: &[Complex64],
        circumference: f64,
        function: BurgersFunction,
        sign: CharacteristicSign,
        opts: FlowOptions,
    ) -> Result<Self> {
        if l0.len() < 4 || l0.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Domain("need at least 4 finite initial samples".into()));
        }
        let spec = Spectral::new(l0.len(), circumference, opts.filter);
        let c = spec.coefficients(l0);
        let modes = c
            .iter()
            .enumerate()
            .filter(|(_, x)| x.norm() > 0.0)
            .map(|(j, &x)| (spec.wavenumber(spec.mode(j).unwrap_or(0)), x))
            .collect();
        Ok(Self { circumference, ny: l0.len(), function, sign, opts, modes })
    }

    /// `(l₀(η), l₀'(η))` at complex `η`.
    fn initial(&self, eta: Complex64) -> (Complex64, Complex64) {
        let i = Complex64::new(0.0, 1.0);
        let mut v = Complex64::new(0.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for &(kappa, c) in &self.modes {
            let e = c * (i * kappa * eta).exp();
            v += e;
            d += e * i * kappa;
        }
        (v, d)
    }

    /// Newton's method for `l = l₀(y ± x F(eˡ))` from `guess`; returns `l`, the Jacobian
    /// `1 ∓ x l₀'(η) F'(eˡ) eˡ` and the foot point `η`.
    fn solve_point(&self, x: f64, y: f64, guess: Complex64) -> Result<(Complex64, Complex64, Complex64)> {
        let sx = self.sign.factor() * x;
        let mut l = guess;
        let mut converged = false;
        for _ in 0..NEWTON_MAX {
            let z = l.exp();
            let eta = y + sx * self.function.eval(z)?;
            let (v, d) = self.initial(eta);
            let jac = 1.0 - d * sx * self.function.derivative(z)? * z;
            if converged {
                return Ok((l, jac, eta));
            }
            let mut step = (l - v) / jac;
            if !(step.re.is_finite() && step.im.is_finite()) {
                break;
            }
            if step.norm() > 0.5 {
                step *= 0.5 / step.norm();
            }
            l -= step;
            converged = step.norm() <= 1e-13 * (1.0 + l.norm());
        }
        let residual = (l - self.initial(y + sx * self.function.eval(l.exp())?).0).norm();
        Err(Error::NonConvergence { iterations: NEWTON_MAX, residual })
    }

    /// Continues `l(·, y_j)` from `x = 0` through every entry of the increasing list `xs`.
    ///
    /// With `periodic`, `ys` is the full sample grid and the foot points must stay ordered.
    fn march(&self, xs: &[f64], ys: &[f64], periodic: bool) -> Result<Vec<Vec<Complex64>>> {
        let mut l: Vec<Complex64> = ys.iter().map(|&y| self.initial(Complex64::new(y, 0.0)).0).collect();
        let mut out = Vec::with_capacity(xs.len());
        let hy = self.circumference / self.ny as f64;
        let mut x0 = 0.0;
        for &x1 in xs {
            if !(x1 >= x0 && x1.is_finite()) {
                return Err(Error::Domain(format!("evaluation points must be increasing and non-negative, got {x1}")));
            }
            let m = ((x1 - x0) / MAX_SUBSTEP).ceil().max(1.0) as usize;
            for k in 1..=m {
                let x = if k == m { x1 } else { x0 + (x1 - x0) * k as f64 / m as f64 };
                if x == 0.0 {
                    continue;
                }
                let mut feet = Vec::with_capacity(ys.len());
                for (j, &y) in ys.iter().enumerate() {
                    let (lj, jac, eta) = self.solve_point(x, y, l[j])?;
                    if jac.norm() < self.opts.shock_delta {
                        return Err(Error::Shock { x, increment: jac.norm() });
                    }
                    l[j] = lj;
                    feet.push((eta, jac));
                }
                if periodic {
                    self.check_feet(x, &feet, hy)?;
                }
            }
            out.push(l.clone());
            x0 = x1;
        }
        Ok(out)
    }

    /// The foot points `η_j` must increase along the grid and their differences must agree
    /// with `dη/dy = 1/J`; otherwise neighbouring samples sit on different sheets.
    fn check_feet(&self, x: f64, feet: &[(Complex64, Complex64)], hy: f64) -> Result<()> {
        let n = feet.len();
        for j in 0..n {
            let (a, ja) = feet[j];
            let (b, jb) = if j + 1 == n { (feet[0].0 + self.circumference, feet[0].1) } else { feet[j + 1] };
            let inc = (b - a) / hy;
            if inc.re < self.opts.shock_delta {
                return Err(Error::Shock { x, increment: inc.re });
            }
            let slope = 0.5 * (1.0 / ja + 1.0 / jb);
            if (inc - slope).norm() > 0.5 * slope.norm() {
                return Err(Error::Shock { x, increment: inc.re });
            }
        }
        Ok(())
    }

    /// `l(x, y)`.
    pub fn eval(&self, x: f64, y: f64) -> Result<Complex64> {
        Ok(self.march(&[x], &[y], false)?[0][0])
    }

    fn grid(&self) -> Vec<f64> {
        let hy = self.circumference / self.ny as f64;
        (0..self.ny).map(|j| j as f64 * hy).collect()
    }

    /// `l(x, ·)` on the sample grid.
    pub fn l_at(&self, x: f64) -> Result<Vec<Complex64>> {
        Ok(self.march(&[x], &self.grid(), true)?.remove(0))
    }

    /// States at the increasing positions `xs`.
    pub fn states(&self, xs: &[f64]) -> Result<Vec<FlowState>> {
        self.march(xs, &self.grid(), true)?.iter().map(|l| FlowState::from_l(self.circumference, l)).collect()
    }

    pub fn state(&self, x: f64) -> Result<FlowState> {
        FlowState::from_l(self.circumference, &self.l_at(x)?)
    }

    /// Samples the height `h` with `∂_y h = Im l / π`, `∂_x h = ∂₁τ(Re l, ∂_y h)` and
    /// `h(0, 0) = 0` on `grid`, whose circumference and `ny` must match the solver.
    pub fn reconstruct(&self, density: &HamiltonianDensity, grid: CylinderGrid) -> Result<HeightField> {
        if grid.ny != self.ny || (grid.circumference - self.circumference).abs() > 1e-12 * self.circumference {
            return Err(Error::Shape("grid does not match the flow samples".into()));
        }
        let spec = Spectral::new(self.ny, self.circumference, self.opts.filter);
        let slope = |x: f64| -> Result<f64> {
            let l = self.eval(x, 0.0)?;
            Ok(density.eval(l.re, l.im / std::f64::consts::PI)?.d1)
        };
        let mut values = Vec::with_capacity(grid.nodes());
        let mut offset = 0.0;
        let mut monodromy = 0.0;
        let xs: Vec<f64> = (0..grid.nx).map(|i| grid.x(i)).collect();
        for (i, s) in self.states(&xs)?.into_iter().enumerate() {
            if i > 0 {
                offset += integrate(slope, grid.x(i - 1), grid.x(i), 1e-12)?;
            }
            let col = spec.cumulative_integral(&s.t);
            if i == 0 {
                monodromy = s.t.iter().sum::<f64>() * s.hy();
            }
            values.extend(col.into_iter().map(|h| h + offset));
        }
        HeightField::new(grid, values, monodromy)
    }
}

/// `l(x, ·)` for initial samples `l0` by characteristics.
pub fn burgers_evolve(l0: &[Complex64], circumference: f64, function: &BurgersFunction, x: f64) -> Result<FlowState> {
    BurgersSolver::new(l0, circumference, function.clone())?.state(x)
}
