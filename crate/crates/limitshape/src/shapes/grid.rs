use crate::tension::SurfaceTension;
use crate::{Error, Result};

/// The cylinder `[0, T] × [0, L)` sampled at `nx × ny` nodes, periodic in `y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderGrid {
    pub length: f64,
    pub circumference: f64,
    pub nx: usize,
    pub ny: usize,
}

impl CylinderGrid {
    pub fn new(length: f64, circumference: f64, nx: usize, ny: usize) -> Result<Self> {
        if !(length > 0.0 && circumference > 0.0 && length.is_finite() && circumference.is_finite()) {
            return Err(Error::Domain(format!("cylinder {length} × {circumference} must have positive size")));
        }
        if nx < 3 || ny < 3 {
            return Err(Error::Domain(format!("grid {nx} × {ny} needs at least 3 nodes per direction")));
        }
        Ok(Self { length, circumference, nx, ny })
    }

    pub fn hx(&self) -> f64 {
        self.length / (self.nx - 1) as f64
    }

    pub fn hy(&self) -> f64 {
        self.circumference / self.ny as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.hx()
    }

    pub fn y(&self, j: usize) -> f64 {
        j as f64 * self.hy()
    }

    pub fn nodes(&self) -> usize {
        self.nx * self.ny
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.ny + j
    }
}

/// Node values of a height function whose `y`-differences are periodic: `h(x, y + L) = h(x, y) + m`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeightField {
    pub grid: CylinderGrid,
    /// Row-major in `x`: `values[i * ny + j] = h(x_i, y_j)`.
    pub values: Vec<f64>,
    /// The monodromy `m` around the cylinder.
    pub monodromy: f64,
}

/// Slopes of one triangle of the mesh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Triangle {
    pub s_plus: usize,
    pub s_minus: usize,
    pub t_plus: usize,
    pub t_minus: usize,
    pub wrap: bool,
}

/// Each cell `[x_i, x_{i+1}] × [y_j, y_{j+1}]` is cut along its anti-diagonal into a lower
/// and an upper triangle; a linear interpolant has constant slope on each.
pub(crate) fn triangles(grid: &CylinderGrid) -> Vec<Triangle> {
    let mut out = Vec::with_capacity(2 * (grid.nx - 1) * grid.ny);
    for i in 0..grid.nx - 1 {
        for j in 0..grid.ny {
            let jn = (j + 1) % grid.ny;
            let wrap = j + 1 == grid.ny;
            let (a, b) = (grid.index(i, j), grid.index(i + 1, j));
            let (c, d) = (grid.index(i, jn), grid.index(i + 1, jn));
            out.push(Triangle { s_plus: b, s_minus: a, t_plus: c, t_minus: a, wrap });
            out.push(Triangle { s_plus: d, s_minus: c, t_plus: d, t_minus: b, wrap });
        }
    }
    out
}

impl HeightField {
    pub fn new(grid: CylinderGrid, values: Vec<f64>, monodromy: f64) -> Result<Self> {
        if values.len() != grid.nodes() {
            return Err(Error::Shape(format!("{} values for a {} × {} grid", values.len(), grid.nx, grid.ny)));
        }
        Ok(Self { grid, values, monodromy })
    }

    /// `h(x, y) = f(x, y)` sampled at the nodes; `f(x, y + L) − f(x, y)` must equal `monodromy`.
    pub fn from_fn(grid: CylinderGrid, monodromy: f64, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(grid.nodes());
        for i in 0..grid.nx {
            for j in 0..grid.ny {
                values.push(f(grid.x(i), grid.y(j)));
            }
        }
        Self { grid, values, monodromy }
    }

    /// `h = s₀ x + t₀ y`.
    pub fn affine(grid: CylinderGrid, s0: f64, t0: f64) -> Self {
        Self::from_fn(grid, t0 * grid.circumference, |x, y| s0 * x + t0 * y)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    /// `h(x_i, y_j)` for any integer `j`, continued by the monodromy.
    pub fn at(&self, i: usize, j: isize) -> f64 {
        let ny = self.grid.ny as isize;
        let k = j.div_euclid(ny);
        self.values[self.grid.index(i, j.rem_euclid(ny) as usize)] + k as f64 * self.monodromy
    }

    pub(crate) fn slope(&self, tri: &Triangle) -> (f64, f64) {
        let (hx, hy) = (self.grid.hx(), self.grid.hy());
        let wrap = if tri.wrap { self.monodromy } else { 0.0 };
        (
            (self.values[tri.s_plus] - self.values[tri.s_minus]) / hx,
            (self.values[tri.t_plus] + wrap - self.values[tri.t_minus]) / hy,
        )
    }

    /// Slopes `(∂_x h, ∂_y h)` of every triangle.
    pub fn slopes(&self) -> Vec<(f64, f64)> {
        triangles(&self.grid).iter().map(|t| self.slope(t)).collect()
    }

    /// Errors unless every triangle slope lies in the domain of `sigma`.
    pub fn check_slopes(&self, sigma: &dyn SurfaceTension) -> Result<()> {
        match self.slopes().into_iter().find(|&(s, t)| !sigma.contains(s, t)) {
            Some((s, t)) => Err(Error::OutOfSlopeDomain(s, t)),
            None => Ok(()),
        }
    }

    /// Column `i` as a function of `y`.
    pub fn column(&self, i: usize) -> &[f64] {
        &self.values[i * self.grid.ny..(i + 1) * self.grid.ny]
    }

    pub fn max_abs_diff(&self, other: &HeightField) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn shifted(&self, c: f64) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|v| v + c).collect(), monodromy: self.monodromy }
    }
}

/// Tangential slopes `∂_y h` at the two ends, one sample per grid interval `[y_j, y_{j+1}]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryData {
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

impl BoundaryData {
    pub fn constant(ny: usize, t0: f64) -> Self {
        Self { left: vec![t0; ny], right: vec![t0; ny] }
    }

    /// Samples `left(y)` and `right(y)` at the interval midpoints.
    pub fn from_fn(grid: &CylinderGrid, left: impl Fn(f64) -> f64, right: impl Fn(f64) -> f64) -> Self {
        let mid = |j: usize| grid.y(j) + 0.5 * grid.hy();
        Self { left: (0..grid.ny).map(|j| left(mid(j))).collect(), right: (0..grid.ny).map(|j| right(mid(j))).collect() }
    }

    /// Resamples `(y, value)` profiles by periodic linear interpolation.
    pub fn from_samples(grid: &CylinderGrid, left: &[(f64, f64)], right: &[(f64, f64)]) -> Result<Self> {
        let l = periodic_interpolant(left, grid.circumference)?;
        let r = periodic_interpolant(right, grid.circumference)?;
        Ok(Self::from_fn(grid, l, r))
    }

    /// The boundary data of an existing field.
    pub fn of_field(hf: &HeightField) -> Self {
        let g = hf.grid;
        let col = |i: usize| (0..g.ny).map(|j| (hf.at(i, j as isize + 1) - hf.at(i, j as isize)) / g.hy()).collect();
        Self { left: col(0), right: col(g.nx - 1) }
    }

    /// The monodromy `Σ_j hy · t_j`, which both ends must share.
    pub fn monodromy(&self, grid: &CylinderGrid) -> Result<f64> {
        if self.left.len() != grid.ny || self.right.len() != grid.ny {
            return Err(Error::Shape(format!("boundary profiles of length {} and {} for ny = {}", self.left.len(), self.right.len(), grid.ny)));
        }
        let hy = grid.hy();
        let ml: f64 = self.left.iter().sum::<f64>() * hy;
        let mr: f64 = self.right.iter().sum::<f64>() * hy;
        if (ml - mr).abs() > 1e-9 * (1.0 + ml.abs()) {
            return Err(Error::Infeasible(format!("left monodromy {ml} differs from right monodromy {mr}")));
        }
        Ok(ml)
    }
}

fn periodic_interpolant(pts: &[(f64, f64)], period: f64) -> Result<impl Fn(f64) -> f64> {
    if pts.is_empty() {
        return Err(Error::Shape("empty boundary profile".into()));
    }
    let mut p: Vec<(f64, f64)> = pts.iter().map(|&(y, v)| (y.rem_euclid(period), v)).collect();
    if p.iter().any(|q| !q.0.is_finite() || !q.1.is_finite()) {
        return Err(Error::Shape("non-finite boundary sample".into()));
    }
    p.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(move |y: f64| {
        let y = y.rem_euclid(period);
        let n = p.len();
        let k = p.partition_point(|q| q.0 <= y);
        let (a, b) = if k == 0 { ((p[n - 1].0 - period, p[n - 1].1), p[0]) } else if k == n { (p[n - 1], (p[0].0 + period, p[0].1)) } else { (p[k - 1], p[k]) };
        if b.0 == a.0 {
            return a.1;
        }
        a.1 + (y - a.0) / (b.0 - a.0) * (b.1 - a.1)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_is_periodic() {
        let g = CylinderGrid::new(1.0, 2.0, 3, 4).unwrap();
        let pts = [(0.0, 0.0), (1.0, 1.0)];
        let b = BoundaryData::from_samples(&g, &pts, &pts).unwrap();
        assert_eq!(b.left, vec![0.25, 0.75, 0.75, 0.25]);
    }

    #[test]
    fn affine_slopes() {
        let g = CylinderGrid::new(2.0, 1.0, 5, 6).unwrap();
        let hf = HeightField::affine(g, 0.3, 0.2);
        for (s, t) in hf.slopes() {
            assert!((s - 0.3).abs() < 1e-14 && (t - 0.2).abs() < 1e-14);
        }
        assert!((hf.at(2, 6) - hf.at(2, 0) - 0.2).abs() < 1e-15);
    }
}
