use crate::{Error, Result};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::fmt;

pub const MAX_EXPONENT: i32 = 8;

/// Laurent polynomial `P(z, w) = Σ c_{ij} z^i w^j` with real coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCurve {
    coeffs: BTreeMap<(i32, i32), f64>,
}

/// A change of variables applied to a curve before comparison. The substitutions act in
/// the order: negate, invert, swap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct CurveVariant {
    pub negate_z: bool,
    pub negate_w: bool,
    pub invert_z: bool,
    pub invert_w: bool,
    pub swap: bool,
}

impl CurveVariant {
    pub const IDENTITY: CurveVariant =
        CurveVariant { negate_z: false, negate_w: false, invert_z: false, invert_w: false, swap: false };

    /// All 32 variants, fewest substitutions first.
    pub fn all() -> Vec<CurveVariant> {
        let mut v: Vec<CurveVariant> = (0..32u32)
            .map(|k| CurveVariant {
                negate_z: k & 1 != 0,
                negate_w: k & 2 != 0,
                invert_z: k & 4 != 0,
                invert_w: k & 8 != 0,
                swap: k & 16 != 0,
            })
            .collect();
        v.sort_by_key(|x| x.count());
        v
    }

    pub fn count(&self) -> u32 {
        [self.negate_z, self.negate_w, self.invert_z, self.invert_w, self.swap].iter().filter(|&&b| b).count() as u32
    }

    pub fn is_identity(&self) -> bool {
        self.count() == 0
    }
}

impl fmt::Display for CurveVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.negate_z {
            parts.push("z->-z");
        }
        if self.negate_w {
            parts.push("w->-w");
        }
        if self.invert_z {
            parts.push("z->1/z");
        }
        if self.invert_w {
            parts.push("w->1/w");
        }
        if self.swap {
            parts.push("z<->w");
        }
        if parts.is_empty() {
            write!(f, "identity")
        } else {
            write!(f, "{}", parts.join(", "))
        }
    }
}

impl SpectralCurve {
    pub fn new(terms: impl IntoIterator<Item = ((i32, i32), f64)>) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for ((i, j), c) in terms {
            if i.abs() > MAX_EXPONENT || j.abs() > MAX_EXPONENT {
                return Err(Error::OutOfRange(format!("exponent ({i}, {j}) beyond {MAX_EXPONENT}")));
            }
            if !c.is_finite() {
                return Err(Error::Domain(format!("coefficient {c} of z^{i} w^{j}")));
            }
            *coeffs.entry((i, j)).or_insert(0.0) += c;
        }
        coeffs.retain(|_, c| *c != 0.0);
        if coeffs.is_empty() {
            return Err(Error::Domain("spectral curve is identically zero".into()));
        }
        Ok(Self { coeffs })
    }

    /// `1 − z − w`.
    pub fn hexagonal() -> Self {
        Self::new([((0, 0), 1.0), ((1, 0), -1.0), ((0, 1), -1.0)]).unwrap()
    }

    /// `(wz − 1) cos u + (z + w) sin u`.
    pub fn free_fermion(u: f64) -> Self {
        let (s, c) = u.sin_cos();
        Self::new([((1, 1), c), ((0, 0), -c), ((1, 0), s), ((0, 1), s)]).unwrap()
    }

    pub fn coefficient(&self, i: i32, j: i32) -> f64 {
        self.coeffs.get(&(i, j)).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i32, i32), f64)> + '_ {
        self.coeffs.iter().map(|(&k, &c)| (k, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Range of `z` exponents.
    pub fn z_range(&self) -> (i32, i32) {
        let it = self.coeffs.keys().map(|k| k.0);
        (it.clone().min().unwrap_or(0), it.max().unwrap_or(0))
    }

    /// Range of `w` exponents.
    pub fn w_range(&self) -> (i32, i32) {
        let it = self.coeffs.keys().map(|k| k.1);
        (it.clone().min().unwrap_or(0), it.max().unwrap_or(0))
    }

    pub fn eval(&self, z: Complex64, w: Complex64) -> Complex64 {
        self.coeffs.iter().map(|(&(i, j), &c)| c * z.powi(i) * w.powi(j)).sum()
    }

    /// `(z ∂_z P, w ∂_w P)` at a point.
    pub fn log_gradient(&self, z: Complex64, w: Complex64) -> (Complex64, Complex64) {
        let mut gz = Complex64::new(0.0, 0.0);
        let mut gw = Complex64::new(0.0, 0.0);
        for (&(i, j), &c) in &self.coeffs {
            let t = c * z.powi(i) * w.powi(j);
            gz += t * i as f64;
            gw += t * j as f64;
        }
        (gz, gw)
    }

    pub fn scaled(&self, k: f64) -> Result<Self> {
        Self::new(self.coeffs.iter().map(|(&e, &c)| (e, k * c)))
    }

    /// Multiplies by `z^a w^b`.
    pub fn shifted(&self, a: i32, b: i32) -> Result<Self> {
        Self::new(self.coeffs.iter().map(|(&(i, j), &c)| ((i + a, j + b), c)))
    }

    /// Exchanges the roles of `z` and `w`.
    pub fn swapped(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(&(i, j), &c)| ((j, i), c)).collect() }
    }

    pub fn transformed(&self, v: CurveVariant) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|(&(mut i, mut j), &c)| {
                let mut c = c;
                if v.negate_z && i % 2 != 0 {
                    c = -c;
                }
                if v.negate_w && j % 2 != 0 {
                    c = -c;
                }
                if v.invert_z {
                    i = -i;
                }
                if v.invert_w {
                    j = -j;
                }
                if v.swap {
                    std::mem::swap(&mut i, &mut j);
                }
                ((i, j), c)
            })
            .collect();
        Self { coeffs }
    }

    /// Representative of the class modulo `±z^a w^b`: the lexicographically smallest
    /// exponent is moved to the origin and its coefficient made positive.
    pub fn normalized(&self) -> Self {
        let (&(i0, j0), &c0) = self.coeffs.iter().next().expect("curve is nonzero");
        let s = c0.signum();
        Self { coeffs: self.coeffs.iter().map(|(&(i, j), &c)| ((i - i0, j - j0), s * c)).collect() }
    }

    fn max_abs(&self) -> f64 {
        self.coeffs.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Coefficientwise equality within `tol` relative to the largest coefficient.
    pub fn approx_eq(&self, other: &SpectralCurve, tol: f64) -> bool {
        let scale = self.max_abs().max(other.max_abs());
        let keys: std::collections::BTreeSet<_> = self.coeffs.keys().chain(other.coeffs.keys()).collect();
        keys.into_iter().all(|&(i, j)| (self.coefficient(i, j) - other.coefficient(i, j)).abs() <= tol * scale)
    }
}

impl fmt::Display for SpectralCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (&(i, j), &c) in &self.coeffs {
            let sign = if c < 0.0 { "-" } else if first { "" } else { "+" };
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{sign}{}", c.abs())?;
            if i != 0 {
                write!(f, " z^{i}")?;
            }
            if j != 0 {
                write!(f, " w^{j}")?;
            }
            first = false;
        }
        Ok(())
    }
}

const UNIT_TOL: f64 = 1e-10;

/// Whether `q = ±z^a w^b p`.
pub fn curves_equal_mod_units(p: &SpectralCurve, q: &SpectralCurve) -> bool {
    p.normalized().approx_eq(&q.normalized(), UNIT_TOL)
}

/// The first variant `v` (fewest substitutions) with `q = ±z^a w^b · v(p)`.
pub fn match_mod_units(p: &SpectralCurve, q: &SpectralCurve) -> Option<CurveVariant> {
    let target = q.normalized();
    CurveVariant::all().into_iter().find(|&v| p.transformed(v).normalized().approx_eq(&target, UNIT_TOL))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_multiples() {
        let p = SpectralCurve::hexagonal();
        let q = p.shifted(-1, 0).unwrap().scaled(-1.0).unwrap();
        assert!(curves_equal_mod_units(&p, &q));
        let r = SpectralCurve::new([((0, 0), 1.0), ((1, 0), -1.0), ((0, 1), -2.0)]).unwrap();
        assert!(!curves_equal_mod_units(&p, &r));
        assert!(!curves_equal_mod_units(&p, &p.scaled(2.0).unwrap()));
    }

    #[test]
    fn variants() {
        let p = SpectralCurve::new([((0, 0), 1.0), ((1, 0), -2.0), ((0, 1), -1.0)]).unwrap();
        assert_eq!(match_mod_units(&p, &p), Some(CurveVariant::IDENTITY));
        let v = match_mod_units(&p, &p.swapped()).unwrap();
        assert!(v.swap && v.count() == 1);
        let inv = p.transformed(CurveVariant { invert_z: true, ..Default::default() });
        assert!(match_mod_units(&p, &inv).unwrap().invert_z);
        assert_eq!(CurveVariant::all().len(), 32);
    }

    #[test]
    fn bounds() {
        assert!(SpectralCurve::new([((9, 0), 1.0)]).is_err());
        assert!(SpectralCurve::new([((0, 0), 0.0)]).is_err());
    }
}
