use super::grid::{triangles, BoundaryData, CylinderGrid, HeightField, Triangle};
use crate::tension::SurfaceTension;
use crate::{Error, Result};

/// `∫∫ (σ(∂_x h, ∂_y h) + V ∂_x h) dx dy` over the piecewise-linear interpolant of `hf`.
pub fn action(hf: &HeightField, sigma: &dyn SurfaceTension, v: f64) -> Result<f64> {
    let area = 0.5 * hf.grid.hx() * hf.grid.hy();
    let mut terms = Vec::with_capacity(2 * hf.grid.nodes());
    for tri in triangles(&hf.grid) {
        let (s, t) = hf.slope(&tri);
        if !sigma.contains(s, t) {
            return Err(Error::OutOfSlopeDomain(s, t));
        }
        terms.push(area * (sigma.value(s, t)? + v * s));
    }
    Ok(pairwise(&terms))
}

fn pairwise(x: &[f64]) -> f64 {
    if x.len() <= 16 {
        return x.iter().sum();
    }
    let (a, b) = x.split_at(x.len() / 2);
    pairwise(a) + pairwise(b)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Stop when `max |∂S/∂h| / (hx hy)` falls below this, or when Newton stagnates below
    /// the rounding floor `16 ε (1 + max|h|) max|Hess σ| / min(hx, hy)²`.
    pub tol: f64,
    pub max_newton: usize,
    /// Record the action after every Newton step.
    pub record_action: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_newton: 100, record_action: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub field: HeightField,
    pub iterations: usize,
    pub cg_iterations: usize,
    pub gradient_norm: f64,
    /// Actions of the start and of every accepted iterate, if recorded.
    pub action_history: Vec<f64>,
    pub converged: bool,
}

/// Unknowns: interior nodes, then the offset `C` of the right column.
struct Problem<'a> {
    grid: CylinderGrid,
    sigma: &'a dyn SurfaceTension,
    v: f64,
    tris: Vec<Triangle>,
    left: Vec<f64>,
    right: Vec<f64>,
    monodromy: f64,
    area: f64,
}

impl<'a> Problem<'a> {
    fn new(grid: CylinderGrid, sigma: &'a dyn SurfaceTension, boundary: &BoundaryData, v: f64) -> Result<Self> {
        let monodromy = boundary.monodromy(&grid)?;
        let hy = grid.hy();
        let profile = |d: &[f64]| {
            let mut acc = 0.0;
            d.iter()
                .map(|t| {
                    let h = acc;
                    acc += hy * t;
                    h
                })
                .collect::<Vec<f64>>()
        };
        Ok(Self {
            grid,
            sigma,
            v,
            tris: triangles(&grid),
            left: profile(&boundary.left),
            right: profile(&boundary.right),
            monodromy,
            area: 0.5 * grid.hx() * grid.hy(),
        })
    }

    fn field(&self, x: &[f64]) -> HeightField {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let c = x[x.len() - 1];
        let mut values = Vec::with_capacity(nx * ny);
        values.extend_from_slice(&self.left);
        values.extend_from_slice(&x[..(nx - 2) * ny]);
        values.extend(self.right.iter().map(|r| r + c));
        HeightField { grid: self.grid, values, monodromy: self.monodromy }
    }

    fn dofs(&self, hf: &HeightField) -> Vec<f64> {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let mut x = hf.values[ny..(nx - 1) * ny].to_vec();
        let c = hf.column(nx - 1).iter().zip(&self.right).map(|(h, r)| h - r).sum::<f64>() / ny as f64;
        x.push(c);
        x
    }

    /// Sums node quantities into dofs; the left column is fixed.
    fn reduce(&self, node: &[f64]) -> Vec<f64> {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let mut out = node[ny..(nx - 1) * ny].to_vec();
        out.push(node[(nx - 1) * ny..].iter().sum());
        out
    }

    fn expand(&self, x: &[f64]) -> Vec<f64> {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let mut node = vec![0.0; ny];
        node.extend_from_slice(&x[..(nx - 2) * ny]);
        node.extend(std::iter::repeat(x[x.len() - 1]).take(ny));
        node
    }

    fn feasible(&self, hf: &HeightField) -> bool {
        self.tris.iter().all(|t| {
            let (s, tt) = hf.slope(t);
            self.sigma.contains(s, tt)
        })
    }

    fn gradient(&self, hf: &HeightField) -> Result<Vec<f64>> {
        let (hx, hy) = (self.grid.hx(), self.grid.hy());
        let mut node = vec![0.0; self.grid.nodes()];
        for tri in &self.tris {
            let (s, t) = hf.slope(tri);
            let g = self.sigma.gradient(s, t)?;
            let gs = self.area * (g[0] + self.v) / hx;
            let gt = self.area * g[1] / hy;
            node[tri.s_plus] += gs;
            node[tri.s_minus] -= gs;
            node[tri.t_plus] += gt;
            node[tri.t_minus] -= gt;
        }
        Ok(self.reduce(&node))
    }

    fn hessians(&self, hf: &HeightField) -> Result<Vec<[[f64; 2]; 2]>> {
        self.tris
            .iter()
            .map(|tri| {
                let (s, t) = hf.slope(tri);
                self.sigma.hessian(s, t)
            })
            .collect()
    }

    fn hess_vec(&self, hess: &[[[f64; 2]; 2]], x: &[f64]) -> Vec<f64> {
        let (hx, hy) = (self.grid.hx(), self.grid.hy());
        let v = self.expand(x);
        let mut node = vec![0.0; self.grid.nodes()];
        for (tri, h) in self.tris.iter().zip(hess) {
            let ds = (v[tri.s_plus] - v[tri.s_minus]) / hx;
            let dt = (v[tri.t_plus] - v[tri.t_minus]) / hy;
            let a = self.area * (h[0][0] * ds + h[0][1] * dt) / hx;
            let b = self.area * (h[1][0] * ds + h[1][1] * dt) / hy;
            node[tri.s_plus] += a;
            node[tri.s_minus] -= a;
            node[tri.t_plus] += b;
            node[tri.t_minus] -= b;
        }
        self.reduce(&node)
    }

    fn diagonal(&self, hess: &[[[f64; 2]; 2]]) -> Vec<f64> {
        let (hx, hy) = (self.grid.hx(), self.grid.hy());
        let mut node = vec![0.0; self.grid.nodes()];
        for (tri, h) in self.tris.iter().zip(hess) {
            let mut add = |n: usize, a: f64, b: f64| node[n] += self.area * (h[0][0] * a * a + 2.0 * h[0][1] * a * b + h[1][1] * b * b);
            if tri.s_minus == tri.t_minus {
                add(tri.s_minus, -1.0 / hx, -1.0 / hy);
                add(tri.s_plus, 1.0 / hx, 0.0);
                add(tri.t_plus, 0.0, 1.0 / hy);
            } else {
                add(tri.s_plus, 1.0 / hx, 1.0 / hy);
                add(tri.s_minus, -1.0 / hx, 0.0);
                add(tri.t_minus, 0.0, -1.0 / hy);
            }
        }
        let mut d = self.reduce(&node);
        let mut e = vec![0.0; d.len()];
        let last = e.len() - 1;
        e[last] = 1.0;
        d[last] = self.hess_vec(hess, &e)[last];
        d
    }

    fn initial(&self) -> HeightField {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let t = self.grid.length;
        let gap = self.right.iter().zip(&self.left).map(|(r, l)| r - l).sum::<f64>() / ny as f64;
        let c0 = self.sigma.center().0 * t - gap;
        let mut values = Vec::with_capacity(nx * ny);
        for i in 0..nx {
            let th = i as f64 / (nx - 1) as f64;
            for j in 0..ny {
                values.push((1.0 - th) * self.left[j] + th * (self.right[j] + c0));
            }
        }
        HeightField { grid: self.grid, values, monodromy: self.monodromy }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inf_norm(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Jacobi-preconditioned conjugate gradients for `H d = b`.
fn pcg(p: &Problem<'_>, hess: &[[[f64; 2]; 2]], b: &[f64], rtol: f64) -> (Vec<f64>, usize) {
    let n = b.len();
    let diag = p.diagonal(hess);
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&diag).map(|(r, d)| r / d).collect();
    let mut d = z.clone();
    let mut rz = dot(&r, &z);
    let target = rtol * dot(b, b).sqrt();
    let max_iter = 20 * n + 100;
    for it in 0..max_iter {
        if dot(&r, &r).sqrt() <= target {
            return (x, it);
        }
        let hd = p.hess_vec(hess, &d);
        let dhd = dot(&d, &hd);
        if !(dhd > 0.0) {
            return (x, it);
        }
        let alpha = rz / dhd;
        for k in 0..n {
            x[k] += alpha * d[k];
            r[k] -= alpha * hd[k];
        }
        z = r.iter().zip(&diag).map(|(r, d)| r / d).collect();
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for k in 0..n {
            d[k] = z[k] + beta * d[k];
        }
    }
    (x, max_iter)
}

/// Minimizes the action over fields with the given tangential slopes at both ends.
pub fn minimize_action(grid: CylinderGrid, sigma: &dyn SurfaceTension, boundary: &BoundaryData, v: f64) -> Result<Solution> {
    let sol = minimize_action_with(grid, sigma, boundary, v, &SolverOptions::default(), None)?;
    if !sol.converged {
        return Err(Error::NonConvergence { iterations: sol.iterations, residual: sol.gradient_norm });
    }
    Ok(sol)
}

/// Newton's method with conjugate-gradient inner solves. Steps are truncated so every
/// triangle slope stays inside the tension's domain, then shortened along the search line
/// until the directional derivative of the action is small; since the action is convex in
/// the node values it never increases.
///
/// Returns the last iterate with `converged = false` when the iteration cap is reached.
pub fn minimize_action_with(
    grid: CylinderGrid,
    sigma: &dyn SurfaceTension,
    boundary: &BoundaryData,
    v: f64,
    opts: &SolverOptions,
    start: Option<&HeightField>,
) -> Result<Solution> {
    let p = Problem::new(grid, sigma, boundary, v)?;
    let mut hf = match start {
        Some(s) => {
            if s.grid != grid {
                return Err(Error::Shape("start field lives on a different grid".into()));
            }
            p.field(&p.dofs(s))
        }
        None => p.initial(),
    };
    if !p.feasible(&hf) {
        return Err(Error::Infeasible("starting field has slopes outside the tension domain".into()));
    }
    let norm = |g: &[f64]| {
        let cell = grid.hx() * grid.hy();
        let last = g.len() - 1;
        inf_norm(&g[..last]).max(g[last].abs() / grid.ny as f64) / cell
    };
    let mut x = p.dofs(&hf);
    let mut g = p.gradient(&hf)?;
    let mut history = Vec::new();
    if opts.record_action {
        history.push(action(&hf, sigma, v)?);
    }
    let mut cg_total = 0;
    let mut gnorm = norm(&g);
    for it in 0..opts.max_newton {
        if gnorm <= opts.tol {
            return Ok(Solution { field: hf, iterations: it, cg_iterations: cg_total, gradient_norm: gnorm, action_history: history, converged: true });
        }
        let hess = p.hessians(&hf)?;
        let floor = {
            let hmax = hf.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let smax = hess.iter().flatten().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
            16.0 * f64::EPSILON * (1.0 + hmax) * smax / grid.hx().min(grid.hy()).powi(2)
        };
        let rhs: Vec<f64> = g.iter().map(|v| -v).collect();
        let (d, cg_its) = pcg(&p, &hess, &rhs, (0.1 * gnorm).clamp(1e-12, 1e-2));
        cg_total += cg_its;
        let slope0 = dot(&g, &d);
        if !(slope0 < 0.0) {
            break;
        }
        let at = |a: f64| -> HeightField {
            let y: Vec<f64> = x.iter().zip(&d).map(|(x, d)| x + a * d).collect();
            p.field(&y)
        };
        let mut amax = 1.0;
        while !p.feasible(&at(amax)) {
            amax *= 0.5;
            if amax < 1e-14 {
                return Err(Error::NonConvergence { iterations: it, residual: gnorm });
            }
        }
        let dphi = |a: f64| -> Result<(f64, HeightField, Vec<f64>)> {
            let f = at(a);
            let g = p.gradient(&f)?;
            Ok((dot(&g, &d), f, g))
        };
        let (mut ds, mut f_new, mut g_new) = dphi(amax)?;
        // close to the optimum the directional derivative is lost in rounding; Newton steps
        // are taken in full
        if ds > 0.5 * slope0.abs() && gnorm > 1e-6 {
            let (mut lo, mut hi) = (0.0, amax);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                (ds, f_new, g_new) = dphi(mid)?;
                if ds.abs() <= 0.5 * slope0.abs() || ds <= 0.0 && hi - lo < 1e-3 * amax {
                    break;
                }
                if ds < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
        }
        hf = f_new;
        g = g_new;
        x = p.dofs(&hf);
        let previous = gnorm;
        gnorm = norm(&g);
        if opts.record_action {
            history.push(action(&hf, sigma, v)?);
        }
        if gnorm <= floor && gnorm > 0.5 * previous {
            return Ok(Solution { field: hf, iterations: it + 1, cg_iterations: cg_total, gradient_norm: gnorm, action_history: history, converged: true });
        }
    }
    let converged = gnorm <= opts.tol;
    Ok(Solution { field: hf, iterations: opts.max_newton, cg_iterations: cg_total, gradient_norm: gnorm, action_history: history, converged })
}
