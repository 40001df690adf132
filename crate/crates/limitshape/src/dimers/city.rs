use super::graph::{BipartiteGraph, Color};
use super::toric::FundamentalDomain;
use crate::{Error, Result};

/// Edge weights of the dimer city gadget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CityWeights {
    pub alpha: [f64; 4],
    pub beta: [f64; 2],
    pub gamma: f64,
}

impl CityWeights {
    pub fn uniform(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self { alpha: [alpha; 4], beta: [beta; 2], gamma }
    }
}

/// City weights realizing the free-fermion weights `(a, b, c)`: `α = √b`, `β = (c − b)/a`, `γ = a`.
pub fn ff_weights_to_city(a: f64, b: f64, c: f64) -> Result<CityWeights> {
    if !(a > 0.0 && b > 0.0 && c > 0.0) || ![a, b, c].iter().all(|x| x.is_finite()) {
        return Err(Error::Domain(format!("weights ({a}, {b}, {c}) must be positive")));
    }
    if c < b {
        return Err(Error::Domain(format!("c = {c} < b = {b} gives a negative beta")));
    }
    Ok(CityWeights::uniform(b.sqrt(), (c - b) / a, a))
}

/// Six-vertex weights `(w1, …, w6)` of one city; `Δ = 0` identically.
pub fn city_vertex_weights(cw: &CityWeights) -> [f64; 6] {
    let [a1, a2, a3, a4] = cw.alpha;
    let [b1, b2] = cw.beta;
    let g = cw.gamma;
    [b1 * b2 * g + b2 * a2 * a3 + b1 * a1 * a4, g, a1 * a3, a4 * a2, a2 * a3 + b1 * g, a1 * a4 + b2 * g]
}

impl FundamentalDomain {
    /// One dimer city as a toric cell. Edge order: `β2, γ, β1, α1, α2, α3, α4`, then the
    /// horizontal and vertical wrap edges of weight 1.
    ///
    /// `P = (β1β2γ + α1α4β1 + α2α3β2) − α1α3 w − α2α4 z^{-1} − γ w z^{-1}`.
    pub fn dimer_city(cw: &CityWeights) -> Result<Self> {
        let [a1, a2, a3, a4] = cw.alpha;
        let [b1, b2] = cw.beta;
        let mut g = BipartiteGraph::new();
        let colors = [Color::Black, Color::White, Color::White, Color::Black, Color::White, Color::Black];
        let d: Vec<usize> = colors.iter().map(|&c| g.add_vertex(c, false, None)).collect();
        g.add_edge(d[0], d[1], b2)?;
        g.add_edge(d[5], d[4], cw.gamma)?;
        g.add_edge(d[3], d[2], b1)?;
        g.add_edge(d[5], d[1], a1)?;
        g.add_edge(d[5], d[2], a2)?;
        g.add_edge(d[3], d[4], a3)?;
        g.add_edge(d[0], d[4], a4)?;
        g.add_crossing_edge(d[0], d[2], 1.0, (1, 0))?;
        g.add_crossing_edge(d[3], d[1], 1.0, (0, -1))?;
        Self::new(g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimers::{characteristic_polynomial, curves_equal_mod_units, enumerate_matchings, SpectralCurve};

    #[test]
    fn unit_city() {
        assert_eq!(city_vertex_weights(&CityWeights::uniform(1.0, 1.0, 1.0)), [3.0, 1.0, 1.0, 1.0, 2.0, 2.0]);
        let w = city_vertex_weights(&CityWeights::uniform(0.7, 0.0, 1.3));
        assert_eq!(w[0], 0.0);
    }

    #[test]
    fn ff_map() {
        let u = std::f64::consts::FRAC_PI_4;
        let cw = ff_weights_to_city(u.cos(), u.sin(), 1.0).unwrap();
        assert!((cw.alpha[0] - 2f64.powf(-0.25)).abs() < 1e-15);
        assert!((cw.beta[0] - (1.0 - 0.5f64.sqrt()) / 0.5f64.sqrt()).abs() < 1e-15);
        assert!((cw.gamma - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(ff_weights_to_city(1.0, 0.5, 0.5).unwrap().beta, [0.0, 0.0]);
        assert!(ff_weights_to_city(1.0, 0.6, 0.5).is_err());
    }

    #[test]
    fn city_polynomial() {
        let cw = CityWeights { alpha: [1.1, 1.3, 0.7, 0.9], beta: [1.7, 0.4], gamma: 0.6 };
        let fd = FundamentalDomain::dimer_city(&cw).unwrap();
        assert_eq!(enumerate_matchings(&fd.cell).unwrap().len(), 6);
        let [a1, a2, a3, a4] = cw.alpha;
        let [b1, b2] = cw.beta;
        let g = cw.gamma;
        let expected = SpectralCurve::new([
            ((0, 0), b1 * b2 * g + a1 * a4 * b1 + a2 * a3 * b2),
            ((0, 1), -a1 * a3),
            ((-1, 0), -a2 * a4),
            ((-1, 1), -g),
        ])
        .unwrap();
        assert!(curves_equal_mod_units(&characteristic_polynomial(&fd).unwrap(), &expected));
    }
}
