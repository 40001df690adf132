use std::f64::consts::FRAC_PI_2;
use std::fmt;

use crate::{Error, Result};

/// Six-vertex weights `(a, b, c)` with horizontal and vertical fields `(h, v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VertexWeights {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub h: f64,
    pub v: f64,
}

impl VertexWeights {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::with_fields(a, b, c, 0.0, 0.0)
    }

    pub fn with_fields(a: f64, b: f64, c: f64, h: f64, v: f64) -> Result<Self> {
        for (name, x) in [("a", a), ("b", b), ("c", c)] {
            if !(x.is_finite() && x > 0.0) {
                return Err(Error::Domain(format!("weight {name} = {x} must be positive and finite")));
            }
        }
        if !(h.is_finite() && v.is_finite()) {
            return Err(Error::Domain(format!("fields ({h}, {v}) must be finite")));
        }
        Ok(Self { a, b, c, h, v })
    }

    /// Free-fermion family `(cos u, sin u, 1)`.
    pub fn free_fermion(u: f64) -> Result<Self> {
        if !(u > 0.0 && u < FRAC_PI_2) {
            return Err(Error::OutOfRange(format!("free-fermion u = {u} outside (0, pi/2)")));
        }
        Self::new(u.cos(), u.sin(), 1.0)
    }

    pub fn fields(self, h: f64, v: f64) -> Result<Self> {
        Self::with_fields(self.a, self.b, self.c, h, v)
    }

    pub fn delta(&self) -> f64 {
        anisotropy_delta(self)
    }

    /// The six Boltzmann weights: empty, full, horizontal line, vertical line, and the two turns.
    pub fn six(&self) -> [f64; 6] {
        let (a, b, c, h, v) = (self.a, self.b, self.c, self.h, self.v);
        [a * (h + v).exp(), a * (-h - v).exp(), b * (v - h).exp(), b * (h - v).exp(), c, c]
    }
}

impl fmt::Display for VertexWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(a={}, b={}, c={}, H={}, V={})", self.a, self.b, self.c, self.h, self.v)
    }
}

pub fn anisotropy_delta(w: &VertexWeights) -> f64 {
    (w.a * w.a + w.b * w.b - w.c * w.c) / (2.0 * w.a * w.b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    A1,
    A2,
    B1,
    B2,
    C,
}

impl Regime {
    pub const ALL: [Regime; 5] = [Regime::A1, Regime::A2, Regime::B1, Regime::B2, Regime::C];

    /// Weights `(a, b, c)` at scale one, evaluated without checking the regime window.
    pub fn abc(self, u: f64, gamma: f64) -> (f64, f64, f64) {
        match self {
            Regime::A1 => ((u + gamma).sinh(), u.sinh(), gamma.sinh()),
            Regime::A2 => ((u - gamma).sinh(), u.sinh(), gamma.sinh()),
            Regime::B1 => ((u - gamma).sin(), u.sin(), gamma.sin()),
            Regime::B2 => ((gamma - u).sin(), u.sin(), gamma.sin()),
            Regime::C => ((gamma - u).sinh(), u.sinh(), gamma.sinh()),
        }
    }

    pub fn in_window(self, u: f64, gamma: f64) -> bool {
        match self {
            Regime::A1 => gamma > 0.0 && u > 0.0,
            Regime::A2 => gamma > 0.0 && gamma < u,
            Regime::B1 => gamma > 0.0 && gamma < FRAC_PI_2 && gamma < u && u < FRAC_PI_2,
            Regime::B2 => gamma > 0.0 && gamma < FRAC_PI_2 && u > 0.0 && u < gamma,
            Regime::C => u > 0.0 && u < gamma,
        }
    }

    /// Anisotropy obtained by substituting the parametrization.
    pub fn delta(self, gamma: f64) -> f64 {
        match self {
            Regime::A1 | Regime::A2 => gamma.cosh(),
            Regime::B1 => gamma.cos(),
            Regime::B2 => -gamma.cos(),
            Regime::C => -gamma.cosh(),
        }
    }
}

impl std::str::FromStr for Regime {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A1" => Ok(Regime::A1),
            "A2" => Ok(Regime::A2),
            "B1" => Ok(Regime::B1),
            "B2" => Ok(Regime::B2),
            "C" => Ok(Regime::C),
            _ => Err(Error::Domain(format!("unknown regime {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaxterParam {
    pub regime: Regime,
    pub u: f64,
    pub gamma: f64,
    pub r: f64,
}

impl BaxterParam {
    pub fn new(regime: Regime, u: f64, gamma: f64, r: f64) -> Result<Self> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::OutOfRange(format!("scale r = {r} must be positive")));
        }
        if !regime.in_window(u, gamma) {
            return Err(Error::OutOfRange(format!("(u, gamma) = ({u}, {gamma}) outside the {regime:?} window")));
        }
        Ok(Self { regime, u, gamma, r })
    }
}

pub fn weights_from_baxter(p: &BaxterParam) -> Result<VertexWeights> {
    if !p.regime.in_window(p.u, p.gamma) {
        return Err(Error::OutOfRange(format!("(u, gamma) = ({}, {}) outside the {:?} window", p.u, p.gamma, p.regime)));
    }
    let (a, b, c) = p.regime.abc(p.u, p.gamma);
    VertexWeights::new(p.r * a, p.r * b, p.r * c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn delta_examples() {
        assert_eq!(VertexWeights::new(3.0, 4.0, 5.0).unwrap().delta(), 0.0);
        assert!((VertexWeights::new(1.0, 1.0, 1.0).unwrap().delta() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn baxter_regimes_match_their_delta() {
        let cases = [
            (Regime::A1, 0.5, 0.3),
            (Regime::A2, 0.9, 0.3),
            (Regime::B1, PI / 3.0, PI / 6.0),
            (Regime::B2, PI / 6.0, PI / 3.0),
            (Regime::C, 0.2, 0.7),
        ];
        for (regime, u, g) in cases {
            let w = weights_from_baxter(&BaxterParam::new(regime, u, g, 1.7).unwrap()).unwrap();
            assert!((w.delta() - regime.delta(g)).abs() < 1e-12, "{regime:?}");
        }
    }

    #[test]
    fn b2_example_and_b1_sign() {
        let w = weights_from_baxter(&BaxterParam::new(Regime::B2, PI / 6.0, PI / 3.0, 1.0).unwrap()).unwrap();
        assert!((w.a - 0.5).abs() < 1e-15 && (w.b - 0.5).abs() < 1e-15);
        assert!((w.c - 3f64.sqrt() / 2.0).abs() < 1e-15);
        let w = weights_from_baxter(&BaxterParam::new(Regime::B1, PI / 3.0, PI / 6.0, 1.0).unwrap()).unwrap();
        assert!((w.delta() - 3f64.sqrt() / 2.0).abs() < 1e-14);
    }

    #[test]
    fn regime_c_midpoint_is_symmetric() {
        let w = weights_from_baxter(&BaxterParam::new(Regime::C, 0.45, 0.9, 1.0).unwrap()).unwrap();
        assert!((w.a - w.b).abs() < 1e-15);
    }

    #[test]
    fn window_violations_are_rejected() {
        assert!(BaxterParam::new(Regime::A2, 0.2, 0.3, 1.0).is_err());
        assert!(BaxterParam::new(Regime::B2, 0.5, 0.3, 1.0).is_err());
        assert!(BaxterParam::new(Regime::C, 0.5, 0.3, 1.0).is_err());
        assert!(VertexWeights::new(0.0, 1.0, 1.0).is_err());
    }
}
