use super::state::{FlowState, Spectral};
use crate::tension::{partial_legendre, PartialLegendre, SurfaceTension, TensionVariant};
use crate::{Error, Result};

/// `τ(p, ξ) = max_ν (pν − σ(ν, ξ))` for a surface tension `σ`.
#[derive(Clone, Copy)]
pub struct HamiltonianDensity<'a> {
    pub sigma: &'a dyn SurfaceTension,
}

impl<'a> HamiltonianDensity<'a> {
    pub fn new(sigma: &'a dyn SurfaceTension) -> Self {
        Self { sigma }
    }

    pub fn variant(&self) -> TensionVariant {
        self.sigma.variant()
    }

    pub fn eval(&self, p: f64, xi: f64) -> Result<PartialLegendre> {
        partial_legendre(self.sigma, p, xi)
    }
}

/// `H = ∫₀^L τ(p(y) + V, ∂_y h(y)) dy` by the periodic trapezoid rule.
pub fn hamiltonian(state: &FlowState, density: &HamiltonianDensity, v: f64) -> Result<f64> {
    let mut sum = 0.0;
    for (&p, &t) in state.p.iter().zip(&state.t) {
        sum += density.eval(p + v, t)?.tau;
    }
    Ok(sum * state.hy())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowOptions {
    /// Fourier modes below this fraction of the largest one are discarded.
    pub filter: f64,
    /// Abort when the characteristic Jacobian drops below this.
    pub shock_delta: f64,
}

impl Default for FlowOptions {
    fn default() -> Self {
        Self { filter: 1e-13, shock_delta: 1e-3 }
    }
}

/// States at `xs[k]`, with node heights `h(xs[k], y_j)` normalized by `h(0, 0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub xs: Vec<f64>,
    pub states: Vec<FlowState>,
    pub heights: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn last(&self) -> &FlowState {
        self.states.last().expect("trajectory has at least the initial state")
    }
}

struct Rhs<'a> {
    density: HamiltonianDensity<'a>,
    spec: Spectral,
}

impl Rhs<'_> {
    /// `(∂_x p, ∂_x t, ∂_x h) = (∂_y ∂₂τ, ∂_y ∂₁τ, ∂₁τ)`.
    fn eval(&self, p: &[f64], t: &[f64]) -> Result<[Vec<f64>; 3]> {
        let mut d1 = Vec::with_capacity(p.len());
        let mut d2 = Vec::with_capacity(p.len());
        for (&pj, &tj) in p.iter().zip(t) {
            let d = self.density.eval(pj, tj)?;
            d1.push(d.d1);
            d2.push(d.d2);
        }
        Ok([self.spec.derivative(&d2), self.spec.derivative(&d1), d1])
    }
}

fn axpy(x: &[f64], a: f64, k: &[f64]) -> Vec<f64> {
    x.iter().zip(k).map(|(x, k)| x + a * k).collect()
}

fn gradient_norm(spec: &Spectral, s: &FlowState) -> f64 {
    let dp = spec.derivative(&s.p);
    let dt = spec.derivative(&s.t);
    dp.iter().zip(&dt).map(|(a, b)| a.hypot(std::f64::consts::PI * b)).fold(0.0, f64::max)
}

/// Integrates `∂_x p = −δH/δh`, `∂_x h = δH/δp` over `[0, x_span]` in `steps` classical
/// Runge–Kutta steps with spectral `y`-derivatives.
pub fn hamilton_evolve(state: &FlowState, density: &HamiltonianDensity, x_span: f64, steps: usize) -> Result<Trajectory> {
    hamilton_evolve_with(state, density, x_span, steps, &FlowOptions::default())
}

pub fn hamilton_evolve_with(
    state: &FlowState,
    density: &HamiltonianDensity,
    x_span: f64,
    steps: usize,
    opts: &FlowOptions,
) -> Result<Trajectory> {
    if !(x_span >= 0.0 && x_span.is_finite()) || steps == 0 {
        return Err(Error::Domain(format!("span {x_span} with {steps} steps")));
    }
    let rhs = Rhs { density: *density, spec: Spectral::new(state.ny(), state.circumference, opts.filter) };
    let dx = x_span / steps as f64;
    let mut cur = FlowState::new(state.circumference, rhs.spec.filtered(&state.p), rhs.spec.filtered(&state.t))?;
    let mut h = rhs.spec.cumulative_integral(&cur.t);
    let g0 = gradient_norm(&rhs.spec, &cur);
    let mut traj = Trajectory { xs: vec![0.0], states: vec![cur.clone()], heights: vec![h.clone()] };
    for step in 1..=steps {
        let (p, t) = (&cur.p, &cur.t);
        let k1 = rhs.eval(p, t)?;
        let k2 = rhs.eval(&axpy(p, 0.5 * dx, &k1[0]), &axpy(t, 0.5 * dx, &k1[1]))?;
        let k3 = rhs.eval(&axpy(p, 0.5 * dx, &k2[0]), &axpy(t, 0.5 * dx, &k2[1]))?;
        let k4 = rhs.eval(&axpy(p, dx, &k3[0]), &axpy(t, dx, &k3[1]))?;
        let combine = |x: &[f64], c: usize| -> Vec<f64> {
            (0..x.len()).map(|j| x[j] + dx / 6.0 * (k1[c][j] + 2.0 * k2[c][j] + 2.0 * k3[c][j] + k4[c][j])).collect()
        };
        let (np, nt) = (combine(p, 0), combine(t, 1));
        h = combine(&h, 2);
        cur = FlowState::new(cur.circumference, rhs.spec.filtered(&np), rhs.spec.filtered(&nt))?;
        let x = step as f64 * dx;
        if g0 > 0.0 {
            let jac = g0 / gradient_norm(&rhs.spec, &cur);
            if jac < opts.shock_delta {
                return Err(Error::Shock { x, increment: jac });
            }
        }
        traj.xs.push(x);
        traj.states.push(cur.clone());
        traj.heights.push(h.clone());
    }
    Ok(traj)
}
