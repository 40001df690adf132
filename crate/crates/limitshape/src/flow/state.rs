use crate::{Error, Result};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::f64::consts::PI;
use std::sync::Arc;

/// Momentum and tangential slope sampled on a periodic `y`-grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub circumference: f64,
    /// `p(y_j)`.
    pub p: Vec<f64>,
    /// `∂_y h(y_j)`.
    pub t: Vec<f64>,
}

impl FlowState {
    pub fn new(circumference: f64, p: Vec<f64>, t: Vec<f64>) -> Result<Self> {
        if !(circumference > 0.0 && circumference.is_finite()) {
            return Err(Error::Domain(format!("circumference {circumference} must be positive")));
        }
        if p.len() != t.len() || p.len() < 4 {
            return Err(Error::Shape(format!("need equal sample counts of at least 4, got {} and {}", p.len(), t.len())));
        }
        if p.iter().chain(&t).any(|v| !v.is_finite()) {
            return Err(Error::Domain("non-finite flow sample".into()));
        }
        Ok(Self { circumference, p, t })
    }

    pub fn from_fns(circumference: f64, ny: usize, p: impl Fn(f64) -> f64, t: impl Fn(f64) -> f64) -> Result<Self> {
        let hy = circumference / ny as f64;
        let ys = (0..ny).map(|j| j as f64 * hy);
        Self::new(circumference, ys.clone().map(&p).collect(), ys.map(&t).collect())
    }

    pub fn constant(circumference: f64, ny: usize, p: f64, t: f64) -> Result<Self> {
        Self::new(circumference, vec![p; ny], vec![t; ny])
    }

    /// From samples of `l = p + iπt`.
    pub fn from_l(circumference: f64, l: &[Complex64]) -> Result<Self> {
        Self::new(circumference, l.iter().map(|z| z.re).collect(), l.iter().map(|z| z.im / PI).collect())
    }

    pub fn ny(&self) -> usize {
        self.p.len()
    }

    pub fn hy(&self) -> f64 {
        self.circumference / self.ny() as f64
    }

    pub fn y(&self, j: usize) -> f64 {
        j as f64 * self.hy()
    }

    pub fn l(&self) -> Vec<Complex64> {
        self.p.iter().zip(&self.t).map(|(&p, &t)| Complex64::new(p, PI * t)).collect()
    }

    pub fn l_bar(&self) -> Vec<Complex64> {
        self.l().into_iter().map(|z| z.conj()).collect()
    }

    pub fn max_abs_diff(&self, other: &FlowState) -> f64 {
        let d = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        d(&self.p, &other.p).max(d(&self.t, &other.t))
    }
}

fn trapezoid_power(l: &[Complex64], hy: f64, n: u32) -> Result<Complex64> {
    if !(1..=8).contains(&n) {
        return Err(Error::Domain(format!("moment order {n} outside 1..=8")));
    }
    Ok(l.iter().map(|z| z.powu(n)).sum::<Complex64>() * hy)
}

/// `I_n = ∫₀^L lⁿ dy` by the periodic trapezoid rule.
pub fn conserved_in(state: &FlowState, n: u32) -> Result<Complex64> {
    trapezoid_power(&state.l(), state.hy(), n)
}

/// `Ī_n = ∫₀^L l̄ⁿ dy`.
pub fn conserved_in_bar(state: &FlowState, n: u32) -> Result<Complex64> {
    trapezoid_power(&state.l_bar(), state.hy(), n)
}

/// FFT helpers for one periodic grid.
pub(crate) struct Spectral {
    n: usize,
    period: f64,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    /// Relative threshold below which Fourier modes are dropped.
    pub filter: f64,
}

impl Spectral {
    pub fn new(n: usize, period: f64, filter: f64) -> Self {
        let mut planner = FftPlanner::new();
        Self { n, period, fwd: planner.plan_fft_forward(n), inv: planner.plan_fft_inverse(n), filter }
    }

    /// Signed mode number of FFT bin `j`; `None` for the Nyquist bin.
    pub fn mode(&self, j: usize) -> Option<i64> {
        let n = self.n;
        if 2 * j == n {
            None
        } else if 2 * j < n {
            Some(j as i64)
        } else {
            Some(j as i64 - n as i64)
        }
    }

    pub fn wavenumber(&self, k: i64) -> f64 {
        2.0 * PI * k as f64 / self.period
    }

    /// Normalized coefficients `c_k` with `v_j = Σ c_k e^{iκ_k y_j}`, small modes removed.
    pub fn coefficients(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut c = v.to_vec();
        self.fwd.process(&mut c);
        let scale = 1.0 / self.n as f64;
        c.iter_mut().for_each(|x| *x *= scale);
        let cut = self.filter * c.iter().fold(0.0f64, |m, x| m.max(x.norm()));
        for (j, x) in c.iter_mut().enumerate() {
            if x.norm() <= cut || self.mode(j).is_none() {
                *x = Complex64::new(0.0, 0.0);
            }
        }
        c
    }

    fn synthesize(&self, mut c: Vec<Complex64>) -> Vec<Complex64> {
        self.inv.process(&mut c);
        c
    }

    pub fn derivative(&self, v: &[f64]) -> Vec<f64> {
        let z: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let mut c = self.coefficients(&z);
        for (j, x) in c.iter_mut().enumerate() {
            let k = self.mode(j).unwrap_or(0);
            *x *= Complex64::new(0.0, self.wavenumber(k));
        }
        self.synthesize(c).into_iter().map(|x| x.re).collect()
    }

    /// Drops small modes of a real periodic signal.
    pub fn filtered(&self, v: &[f64]) -> Vec<f64> {
        let z: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let c = self.coefficients(&z);
        if c.iter().enumerate().all(|(j, x)| j == 0 || x.norm() == 0.0) {
            return v.to_vec();
        }
        self.synthesize(c).into_iter().map(|x| x.re).collect()
    }

    /// `∫₀^{y_j} v dy`, exact for trigonometric polynomials.
    pub fn cumulative_integral(&self, v: &[f64]) -> Vec<f64> {
        let z: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let mut c = self.coefficients(&z);
        let mean = c[0].re;
        c[0] = Complex64::new(0.0, 0.0);
        let mut at_zero = Complex64::new(0.0, 0.0);
        for (j, x) in c.iter_mut().enumerate() {
            if let Some(k) = self.mode(j).filter(|&k| k != 0) {
                *x /= Complex64::new(0.0, self.wavenumber(k));
                at_zero += *x;
            }
        }
        let hy = self.period / self.n as f64;
        self.synthesize(c).into_iter().enumerate().map(|(j, x)| mean * j as f64 * hy + (x - at_zero).re).collect()
    }
}
