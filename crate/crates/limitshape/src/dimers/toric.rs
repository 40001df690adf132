use super::curve::SpectralCurve;
use super::graph::{BipartiteGraph, Color};
use super::matching::{config_weight, enumerate_matchings, DimerConfig};
use crate::{Error, Result};
use std::collections::BTreeMap;

/// One cell of a doubly periodic bipartite graph; edges leaving the cell carry their
/// crossing numbers with the cycles `a` (horizontal) and `b` (vertical).
#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalDomain {
    pub cell: BipartiteGraph,
}

impl FundamentalDomain {
    pub fn new(cell: BipartiteGraph) -> Result<Self> {
        if cell.vertices.iter().any(|v| v.boundary) {
            return Err(Error::Domain("a toric cell has no boundary vertices".into()));
        }
        Ok(Self { cell })
    }

    /// Single hexagonal cell: one black and one white vertex joined by three edges, giving
    /// `P = w0 − w1 z − w2 w`.
    pub fn hexagonal(weights: [f64; 3]) -> Result<Self> {
        let mut g = BipartiteGraph::new();
        let b = g.add_vertex(Color::Black, false, None);
        let w = g.add_vertex(Color::White, false, None);
        g.add_edge(b, w, weights[0])?;
        g.add_crossing_edge(b, w, weights[1], (0, 1))?;
        g.add_crossing_edge(b, w, weights[2], (1, 0))?;
        Self::new(g)
    }

    /// The monodromy `(Δ_aθ, Δ_bθ)` of `d` relative to `d0`.
    pub fn monodromy(&self, d: &DimerConfig, d0: &DimerConfig) -> (i32, i32) {
        d.difference(d0).iter().zip(&self.cell.edges).fold((0, 0), |(a, b), (&o, e)| (a + o * e.cross.0, b + o * e.cross.1))
    }
}

/// `P(z, w) = Σ_D W(D) z^{Δ_b} w^{Δ_a} (−1)^{Δ_a Δ_b + Δ_a + Δ_b}` over the toric matchings of
/// the cell, with the first enumerated matching as reference. `W(D)` is not divided by `W(D0)`.
pub fn characteristic_polynomial(fd: &FundamentalDomain) -> Result<SpectralCurve> {
    characteristic_polynomial_with_reference(fd, 0)
}

/// As [`characteristic_polynomial`], with the `k`-th enumerated matching as reference.
pub fn characteristic_polynomial_with_reference(fd: &FundamentalDomain, k: usize) -> Result<SpectralCurve> {
    let ms = enumerate_matchings(&fd.cell)?;
    let d0 = ms.get(k).ok_or(Error::NoMatching)?;
    let mut terms: BTreeMap<(i32, i32), f64> = BTreeMap::new();
    for d in &ms {
        let (da, db) = fd.monodromy(d, d0);
        let sign = if (da * db + da + db).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        *terms.entry((db, da)).or_insert(0.0) += sign * config_weight(&fd.cell, d);
    }
    SpectralCurve::new(terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hexagonal_curve() {
        let p = characteristic_polynomial(&FundamentalDomain::hexagonal([1.0, 1.0, 1.0]).unwrap()).unwrap();
        assert_eq!(p, SpectralCurve::hexagonal());
    }

    #[test]
    fn doubling_scales_by_two() {
        let p = characteristic_polynomial(&FundamentalDomain::hexagonal([0.3, 1.7, 0.9]).unwrap()).unwrap();
        let q = characteristic_polynomial(&FundamentalDomain::hexagonal([0.6, 3.4, 1.8]).unwrap()).unwrap();
        assert!(p.scaled(2.0).unwrap().approx_eq(&q, 1e-15));
    }
}
