use super::rmatrix::RMatrix4;
use super::weights::VertexWeights;
use crate::{Error, Result};

pub const MAX_ENUMERATION_EDGES: usize = 36;

/// Edge ids around one vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VertexPorts {
    pub west: usize,
    pub north: usize,
    pub east: usize,
    pub south: usize,
}

impl VertexPorts {
    fn edges(&self) -> [usize; 4] {
        [self.west, self.north, self.east, self.south]
    }
}

/// Shape of a lattice domain; `m` columns by `n` rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainKind {
    Custom,
    Planar { m: usize, n: usize },
    Cylinder { m: usize, n: usize },
    Torus { m: usize, n: usize },
}

/// A finite piece of the square lattice: vertices with their four edges, and optional
/// prescribed occupations on some edges.
#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    pub kind: DomainKind,
    pub n_edges: usize,
    pub vertices: Vec<VertexPorts>,
    pub fixed: Vec<Option<bool>>,
    /// Order in which the depth-first search assigns edges.
    pub order: Vec<usize>,
}

/// A subset of edges, as one flag per edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SixVertexState {
    pub occupied: Vec<bool>,
}

impl Domain {
    pub fn empty() -> Self {
        Self { kind: DomainKind::Custom, n_edges: 0, vertices: Vec::new(), fixed: Vec::new(), order: Vec::new() }
    }

    pub fn custom(n_edges: usize, vertices: Vec<VertexPorts>) -> Self {
        Self::with_vertices(DomainKind::Custom, n_edges, vertices, (0..n_edges).collect())
    }

    fn with_vertices(kind: DomainKind, n_edges: usize, vertices: Vec<VertexPorts>, order: Vec<usize>) -> Self {
        Self { kind, n_edges, vertices, fixed: vec![None; n_edges], order }
    }

    /// Id of horizontal edge `(j, i)`: the west edge of vertex `(j, i)`.
    pub fn h_edge(&self, j: usize, i: usize) -> usize {
        match self.kind {
            DomainKind::Planar { n, .. } | DomainKind::Cylinder { n, .. } => j * n + i,
            DomainKind::Torus { m, n } => (j % m) * n + i,
            DomainKind::Custom => panic!("custom domains have no grid layout"),
        }
    }

    /// Id of vertical edge `(j, i)`: the south edge of vertex `(j, i)`.
    pub fn v_edge(&self, j: usize, i: usize) -> usize {
        match self.kind {
            DomainKind::Planar { m, n } => (m + 1) * n + j * (n + 1) + i,
            DomainKind::Cylinder { m, n } => (m + 1) * n + j * n + (i % n),
            DomainKind::Torus { m, n } => m * n + j * n + (i % n),
            DomainKind::Custom => panic!("custom domains have no grid layout"),
        }
    }

    /// One vertex with four free boundary edges.
    pub fn single_vertex() -> Self {
        Self::with_vertices(DomainKind::Custom, 4, vec![VertexPorts { west: 0, north: 1, east: 2, south: 3 }], vec![0, 1, 2, 3])
    }

    /// `m` columns by `n` rows with free boundary edges on all four sides.
    ///
    /// Horizontal edge `(j, i)` is the west edge of vertex `(j, i)`, `j ∈ 0..=m`; vertical
    /// edge `(j, i)` is the south edge of vertex `(j, i)`, `i ∈ 0..=n`.
    pub fn planar(m: usize, n: usize) -> Self {
        let h = |j: usize, i: usize| j * n + i;
        let nh = (m + 1) * n;
        let v = |j: usize, i: usize| nh + j * (n + 1) + i;
        let mut vertices = Vec::with_capacity(m * n);
        let mut order = Vec::new();
        for j in 0..m {
            order.extend((0..n).map(|i| h(j, i)));
            order.extend((0..=n).map(|i| v(j, i)));
            for i in 0..n {
                vertices.push(VertexPorts { west: h(j, i), north: v(j, i + 1), east: h(j + 1, i), south: v(j, i) });
            }
        }
        order.extend((0..n).map(|i| h(m, i)));
        Self::with_vertices(DomainKind::Planar { m, n }, nh + m * (n + 1), vertices, order)
    }

    /// `m` columns by `n` rows, periodic vertically; the horizontal edges of slices `0` and
    /// `m` are the left and right boundaries.
    pub fn cylinder(m: usize, n: usize) -> Self {
        let h = |j: usize, i: usize| j * n + i;
        let nh = (m + 1) * n;
        let v = |j: usize, i: usize| nh + j * n + (i % n);
        let mut vertices = Vec::with_capacity(m * n);
        let mut order = Vec::new();
        for j in 0..m {
            order.extend((0..n).map(|i| h(j, i)));
            order.extend((0..n).map(|i| v(j, i)));
            for i in 0..n {
                vertices.push(VertexPorts { west: h(j, i), north: v(j, i + 1), east: h(j + 1, i), south: v(j, i) });
            }
        }
        order.extend((0..n).map(|i| h(m, i)));
        Self::with_vertices(DomainKind::Cylinder { m, n }, nh + m * n, vertices, order)
    }

    /// `m` columns by `n` rows, periodic in both directions.
    pub fn torus(m: usize, n: usize) -> Self {
        let h = |j: usize, i: usize| (j % m) * n + i;
        let nh = m * n;
        let v = |j: usize, i: usize| nh + j * n + (i % n);
        let mut vertices = Vec::with_capacity(m * n);
        let mut order = Vec::new();
        for j in 0..m {
            order.extend((0..n).map(|i| h(j, i)));
            order.extend((0..n).map(|i| v(j, i)));
            for i in 0..n {
                vertices.push(VertexPorts { west: h(j, i), north: v(j, i + 1), east: h(j + 1, i), south: v(j, i) });
            }
        }
        Self::with_vertices(DomainKind::Torus { m, n }, 2 * m * n, vertices, order)
    }

    pub fn fix(mut self, edge: usize, occupied: bool) -> Self {
        self.fixed[edge] = Some(occupied);
        self
    }
}

fn ice_ok(p: &VertexPorts, occ: &[bool]) -> bool {
    occ[p.west] as u8 + occ[p.north] as u8 == occ[p.east] as u8 + occ[p.south] as u8
}

/// All edge subsets of `domain` obeying the ice rule `W + N = E + S` at every vertex.
pub fn enumerate_states(domain: &Domain) -> Result<Vec<SixVertexState>> {
    if domain.n_edges > MAX_ENUMERATION_EDGES {
        return Err(Error::TooLarge(format!("{} edges exceed the enumeration cap {MAX_ENUMERATION_EDGES}", domain.n_edges)));
    }
    let mut order = domain.order.clone();
    for e in 0..domain.n_edges {
        if !order.contains(&e) {
            order.push(e);
        }
    }
    let mut rank = vec![0; domain.n_edges];
    for (k, &e) in order.iter().enumerate() {
        rank[e] = k;
    }
    // vertices to check once the edge at a given depth is assigned
    let mut check_at: Vec<Vec<usize>> = vec![Vec::new(); domain.n_edges.max(1)];
    for (vi, p) in domain.vertices.iter().enumerate() {
        let last = p.edges().iter().map(|&e| rank[e]).max().unwrap_or(0);
        check_at[last].push(vi);
    }
    let mut out = Vec::new();
    let mut occ = vec![false; domain.n_edges];
    fn dfs(
        depth: usize,
        order: &[usize],
        domain: &Domain,
        check_at: &[Vec<usize>],
        occ: &mut Vec<bool>,
        out: &mut Vec<SixVertexState>,
    ) {
        if depth == order.len() {
            out.push(SixVertexState { occupied: occ.clone() });
            return;
        }
        let e = order[depth];
        let choices: &[bool] = match domain.fixed[e] {
            Some(true) => &[true],
            Some(false) => &[false],
            None => &[false, true],
        };
        for &c in choices {
            occ[e] = c;
            if check_at[depth].iter().all(|&v| ice_ok(&domain.vertices[v], occ)) {
                dfs(depth + 1, order, domain, check_at, occ, out);
            }
        }
        occ[e] = false;
    }
    dfs(0, &order, domain, &check_at, &mut occ, &mut out);
    Ok(out)
}

/// Product of the vertex weights of a state.
pub fn state_weight(domain: &Domain, state: &SixVertexState, w: &VertexWeights) -> f64 {
    let r = RMatrix4::from_weights(w);
    let o = |e: usize| state.occupied[e] as u8;
    domain.vertices.iter().map(|p| r.vertex(o(p.west), o(p.north), o(p.east), o(p.south))).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(enumerate_states(&Domain::single_vertex()).unwrap().len(), 6);
        assert_eq!(enumerate_states(&Domain::torus(1, 1)).unwrap().len(), 4);
        assert_eq!(enumerate_states(&Domain::empty()).unwrap().len(), 1);
    }

    #[test]
    fn cap() {
        assert!(matches!(enumerate_states(&Domain::torus(5, 4)), Err(Error::TooLarge(_))));
    }

    #[test]
    fn one_by_one_torus_weight() {
        let w = VertexWeights::new(1.3, 0.4, 0.8).unwrap();
        let d = Domain::torus(1, 1);
        let z: f64 = enumerate_states(&d).unwrap().iter().map(|s| state_weight(&d, s, &w)).sum();
        assert!((z - 2.0 * (1.3 + 0.4)).abs() < 1e-15);
    }
}
