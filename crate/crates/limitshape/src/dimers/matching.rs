use super::graph::{BipartiteGraph, MAX_MATCHING_EDGES};
use crate::{Error, Result};

/// A set of edges, one flag per edge of the underlying graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DimerConfig {
    pub occupied: Vec<bool>,
}

impl DimerConfig {
    pub fn from_edges(n_edges: usize, edges: &[usize]) -> Self {
        let mut occupied = vec![false; n_edges];
        for &e in edges {
            occupied[e] = true;
        }
        Self { occupied }
    }

    pub fn contains(&self, e: usize) -> bool {
        self.occupied[e]
    }

    pub fn edges(&self) -> Vec<usize> {
        (0..self.occupied.len()).filter(|&e| self.occupied[e]).collect()
    }

    /// `1_D − 1_{D0}` per edge.
    pub fn difference(&self, reference: &DimerConfig) -> Vec<i32> {
        self.occupied.iter().zip(&reference.occupied).map(|(&a, &b)| a as i32 - b as i32).collect()
    }
}

/// Checks that internal vertices are covered once and boundary vertices at most once.
pub fn is_matching(g: &BipartiteGraph, d: &DimerConfig) -> bool {
    if d.occupied.len() != g.n_edges() {
        return false;
    }
    let mut cover = vec![0u32; g.n_vertices()];
    for e in d.edges() {
        cover[g.edges[e].black] += 1;
        cover[g.edges[e].white] += 1;
    }
    g.vertices.iter().zip(&cover).all(|(v, &c)| if v.boundary { c <= 1 } else { c == 1 })
}

/// All matchings of `g`, in the order of a depth-first search that always covers the
/// lowest-index uncovered internal vertex next, trying its edges in increasing order.
/// Edges between two boundary vertices are decided last, absent before present.
pub fn enumerate_matchings(g: &BipartiteGraph) -> Result<Vec<DimerConfig>> {
    if g.n_edges() > MAX_MATCHING_EDGES {
        return Err(Error::TooLarge(format!("{} edges exceed the matching cap {MAX_MATCHING_EDGES}", g.n_edges())));
    }
    let inc = g.incidence();
    let internal: Vec<usize> = (0..g.n_vertices()).filter(|&v| !g.vertices[v].boundary).collect();
    let free_edges: Vec<usize> = (0..g.n_edges())
        .filter(|&e| g.vertices[g.edges[e].black].boundary && g.vertices[g.edges[e].white].boundary)
        .collect();
    struct Search<'a> {
        g: &'a BipartiteGraph,
        inc: &'a [Vec<usize>],
        internal: &'a [usize],
        free_edges: &'a [usize],
        covered: Vec<bool>,
        chosen: Vec<bool>,
        out: Vec<DimerConfig>,
    }
    impl Search<'_> {
        fn internal_step(&mut self, from: usize) {
            let next = self.internal[from..].iter().position(|&v| !self.covered[v]).map(|k| from + k);
            let Some(k) = next else {
                self.boundary_step(0);
                return;
            };
            let v = self.internal[k];
            for &e in &self.inc[v] {
                let u = self.g.other_end(e, v);
                if self.covered[u] {
                    continue;
                }
                self.covered[u] = true;
                self.covered[v] = true;
                self.chosen[e] = true;
                self.internal_step(k + 1);
                self.chosen[e] = false;
                self.covered[v] = false;
                self.covered[u] = false;
            }
        }

        fn boundary_step(&mut self, k: usize) {
            if k == self.free_edges.len() {
                self.out.push(DimerConfig { occupied: self.chosen.clone() });
                return;
            }
            self.boundary_step(k + 1);
            let e = self.free_edges[k];
            let (b, w) = (self.g.edges[e].black, self.g.edges[e].white);
            if !self.covered[b] && !self.covered[w] {
                self.covered[b] = true;
                self.covered[w] = true;
                self.chosen[e] = true;
                self.boundary_step(k + 1);
                self.chosen[e] = false;
                self.covered[b] = false;
                self.covered[w] = false;
            }
        }
    }
    let mut s = Search {
        g,
        inc: &inc,
        internal: &internal,
        free_edges: &free_edges,
        covered: vec![false; g.n_vertices()],
        chosen: vec![false; g.n_edges()],
        out: Vec::new(),
    };
    s.internal_step(0);
    Ok(s.out)
}

/// `W(D)`, the product of the weights of the occupied edges.
pub fn config_weight(g: &BipartiteGraph, d: &DimerConfig) -> f64 {
    d.edges().iter().map(|&e| g.edges[e].weight).product()
}

#[cfg(test)]
mod tests {
    use super::super::graph::Color;
    use super::*;

    #[test]
    fn single_edge() {
        let mut g = BipartiteGraph::new();
        let b = g.add_vertex(Color::Black, false, None);
        let w = g.add_vertex(Color::White, false, None);
        g.add_edge(b, w, 1.0).unwrap();
        assert_eq!(enumerate_matchings(&g).unwrap().len(), 1);
        g.vertices[0].boundary = true;
        g.vertices[1].boundary = true;
        assert_eq!(enumerate_matchings(&g).unwrap().len(), 2);
    }

    #[test]
    fn square_has_two() {
        let mut g = BipartiteGraph::new();
        let v: Vec<usize> = (0..4).map(|i| g.add_vertex(if i % 2 == 0 { Color::Black } else { Color::White }, false, None)).collect();
        for i in 0..4 {
            g.add_edge(v[i], v[(i + 1) % 4], 1.0).unwrap();
        }
        let ms = enumerate_matchings(&g).unwrap();
        assert_eq!(ms.len(), 2);
        assert!(ms.iter().all(|d| is_matching(&g, d)));
    }

    #[test]
    fn unbalanced_graph_has_none() {
        let mut g = BipartiteGraph::new();
        let b = g.add_vertex(Color::Black, false, None);
        let w1 = g.add_vertex(Color::White, false, None);
        let w2 = g.add_vertex(Color::White, false, None);
        g.add_edge(b, w1, 1.0).unwrap();
        g.add_edge(b, w2, 1.0).unwrap();
        assert!(enumerate_matchings(&g).unwrap().is_empty());
    }
}
