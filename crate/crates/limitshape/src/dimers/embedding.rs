use super::graph::BipartiteGraph;
use crate::{Error, Result};
use std::f64::consts::PI;

/// Faces of a planar graph, recorded by the face on each side of every edge.
///
/// Sides are taken with the edge oriented from black to white.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarEmbedding {
    pub n_faces: usize,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    /// The unbounded face; it borders no edge when the graph has boundary vertices.
    pub outer: Option<usize>,
}

impl PlanarEmbedding {
    pub fn from_faces(n_faces: usize, left: Vec<usize>, right: Vec<usize>, outer: Option<usize>) -> Result<Self> {
        if left.len() != right.len() {
            return Err(Error::Shape("left and right face lists differ in length".into()));
        }
        if left.iter().chain(&right).chain(outer.iter()).any(|&f| f >= n_faces) {
            return Err(Error::Domain(format!("face index beyond {n_faces}")));
        }
        Ok(Self { n_faces, left, right, outer })
    }

    /// Traces the faces of a straight-line drawing.
    ///
    /// Boundary vertices are closed up by virtual arcs in angular order about the centroid,
    /// so the unbounded face consists of virtual arcs only.
    pub fn from_coordinates(g: &BipartiteGraph) -> Result<Self> {
        let pos: Vec<(f64, f64)> = g
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| v.position.ok_or_else(|| Error::Domain(format!("vertex {i} has no position"))))
            .collect::<Result<_>>()?;
        let n = pos.len();
        let m = g.n_edges();
        let (cx, cy) = pos.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0 / n as f64, b + p.1 / n as f64));
        let polar = |v: usize| (pos[v].1 - cy).atan2(pos[v].0 - cx);
        let mut boundary: Vec<usize> = (0..n).filter(|&v| g.vertices[v].boundary).collect();
        boundary.sort_by(|&a, &b| polar(a).total_cmp(&polar(b)));
        let nb = if boundary.len() >= 2 { boundary.len() } else { 0 };

        // half-edges: 2e is black -> white, 2e+1 its twin; arcs follow at 2m + 2k
        let total = 2 * m + 2 * nb;
        let mut origin = vec![0usize; total];
        for (e, edge) in g.edges.iter().enumerate() {
            origin[2 * e] = edge.black;
            origin[2 * e + 1] = edge.white;
        }
        for k in 0..nb {
            origin[2 * m + 2 * k] = boundary[k];
            origin[2 * m + 2 * k + 1] = boundary[(k + 1) % nb];
        }
        let mut rotation: Vec<Vec<(f64, usize)>> = vec![Vec::new(); n];
        for h in 0..2 * m {
            let (a, b) = (origin[h], origin[h ^ 1]);
            rotation[a].push(((pos[b].1 - pos[a].1).atan2(pos[b].0 - pos[a].0), h));
        }
        for k in 0..nb {
            // at a boundary vertex the arcs bracket the real edges: forward, real..., backward
            let (fwd, bwd) = (2 * m + 2 * k, 2 * m + 2 * k + 1);
            let (a, b) = (origin[fwd], origin[bwd]);
            rotation[a].push((polar(a) + PI / 2.0, fwd));
            rotation[b].push((polar(b) - PI / 2.0, bwd));
        }
        let mut position = vec![0usize; total];
        for rot in rotation.iter_mut() {
            rot.sort_by(|x, y| x.0.rem_euclid(2.0 * PI).total_cmp(&y.0.rem_euclid(2.0 * PI)));
            for (k, &(_, h)) in rot.iter().enumerate() {
                position[h] = k;
            }
        }
        let next = |h: usize| {
            let t = h ^ 1;
            let rot = &rotation[origin[t]];
            rot[(position[t] + rot.len() - 1) % rot.len()].1
        };
        let mut face = vec![usize::MAX; total];
        let mut n_faces = 0;
        let mut outer = None;
        for start in 0..total {
            if face[start] != usize::MAX {
                continue;
            }
            let (mut h, mut area, mut all_virtual) = (start, 0.0, true);
            loop {
                face[h] = n_faces;
                let (p, q) = (pos[origin[h]], pos[origin[h ^ 1]]);
                area += p.0 * q.1 - q.0 * p.1;
                all_virtual &= h >= 2 * m;
                h = next(h);
                if h == start {
                    break;
                }
            }
            if (nb > 0 && all_virtual) || (nb == 0 && area < 0.0) {
                outer = Some(n_faces);
            }
            n_faces += 1;
        }
        let euler = n as i64 - (m + nb) as i64 + n_faces as i64;
        if euler != 2 && m > 0 {
            return Err(Error::Inconsistent(format!("drawing is not a connected plane graph (V - E + F = {euler})")));
        }
        let left = (0..m).map(|e| face[2 * e]).collect();
        let right = (0..m).map(|e| face[2 * e + 1]).collect();
        Ok(Self { n_faces, left, right, outer })
    }

    /// Face used as the default height reference: the outer face if it borders an edge,
    /// otherwise the left face of edge 0.
    pub fn reference_face(&self) -> usize {
        match self.outer {
            Some(f) if self.left.contains(&f) || self.right.contains(&f) => f,
            _ => self.left.first().copied().unwrap_or(0),
        }
    }

    /// Integrates per-edge steps `θ(left) − θ(right)` from `reference`; faces not reached
    /// through edges stay `None`.
    pub fn integrate(&self, step: &[f64], reference: usize, value: f64) -> Result<Vec<Option<f64>>> {
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.n_faces];
        for (e, (&l, &r)) in self.left.iter().zip(&self.right).enumerate() {
            adj[l].push((e, r));
            adj[r].push((e, l));
        }
        let mut theta = vec![None; self.n_faces];
        theta[reference] = Some(value);
        let mut queue = std::collections::VecDeque::from([reference]);
        while let Some(f) = queue.pop_front() {
            let tf = theta[f].unwrap_or(0.0);
            for &(e, g) in &adj[f] {
                let tg = if self.left[e] == f { tf - step[e] } else { tf + step[e] };
                match theta[g] {
                    None => {
                        theta[g] = Some(tg);
                        queue.push_back(g);
                    }
                    Some(t) if (t - tg).abs() > 1e-9 => {
                        return Err(Error::Inconsistent(format!("height steps around face {g} do not close (edge {e})")));
                    }
                    Some(_) => {}
                }
            }
        }
        Ok(theta)
    }
}

#[cfg(test)]
mod tests {
    use super::super::graph::Color;
    use super::*;

    #[test]
    fn square_has_two_faces() {
        let mut g = BipartiteGraph::new();
        let p = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
        let v: Vec<usize> = (0..4).map(|i| g.add_vertex(if i % 2 == 0 { Color::Black } else { Color::White }, false, Some(p[i]))).collect();
        for i in 0..4 {
            g.add_edge(v[i], v[(i + 1) % 4], 1.0).unwrap();
        }
        let emb = PlanarEmbedding::from_coordinates(&g).unwrap();
        assert_eq!(emb.n_faces, 2);
        let outer = emb.outer.unwrap();
        for e in 0..4 {
            assert_ne!(emb.left[e], emb.right[e]);
            assert!(emb.left[e] == outer || emb.right[e] == outer);
        }
    }

    #[test]
    fn dangling_edge_has_two_sides() {
        let mut g = BipartiteGraph::new();
        let b = g.add_vertex(Color::Black, true, Some((0.0, 0.0)));
        let w = g.add_vertex(Color::White, true, Some((1.0, 0.0)));
        g.add_edge(b, w, 1.0).unwrap();
        let emb = PlanarEmbedding::from_coordinates(&g).unwrap();
        assert_eq!(emb.n_faces, 3);
        assert_ne!(emb.left[0], emb.right[0]);
        assert!(emb.outer.is_some_and(|o| o != emb.left[0] && o != emb.right[0]));
    }
}
