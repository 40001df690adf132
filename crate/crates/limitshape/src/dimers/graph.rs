use crate::{Error, Result};
use std::collections::HashMap;

pub const MAX_MATCHING_EDGES: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Color {
    Black,
    White,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    pub color: Color,
    /// Boundary vertices may be left uncovered by a matching.
    pub boundary: bool,
    pub position: Option<(f64, f64)>,
}

/// An edge, always stored with its black end first. `cross` counts signed crossings of the
/// two cycles `a` and `b` of a toric fundamental domain, oriented black to white.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub black: usize,
    pub white: usize,
    pub weight: f64,
    pub cross: (i32, i32),
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BipartiteGraph {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
}

impl BipartiteGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, color: Color, boundary: bool, position: Option<(f64, f64)>) -> usize {
        self.vertices.push(Vertex { color, boundary, position });
        self.vertices.len() - 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize, weight: f64) -> Result<usize> {
        self.add_crossing_edge(u, v, weight, (0, 0))
    }

    pub fn add_crossing_edge(&mut self, u: usize, v: usize, weight: f64, cross: (i32, i32)) -> Result<usize> {
        let n = self.vertices.len();
        if u >= n || v >= n {
            return Err(Error::Domain(format!("edge ({u}, {v}) refers to a missing vertex")));
        }
        if !(weight > 0.0 && weight.is_finite()) {
            return Err(Error::Domain(format!("edge weight {weight} must be positive")));
        }
        let (black, white) = match (self.vertices[u].color, self.vertices[v].color) {
            (Color::Black, Color::White) => (u, v),
            (Color::White, Color::Black) => (v, u),
            _ => return Err(Error::Domain(format!("edge ({u}, {v}) joins vertices of the same color"))),
        };
        self.edges.push(Edge { black, white, weight, cross });
        Ok(self.edges.len() - 1)
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// Incident edge ids per vertex, in increasing order.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertices.len()];
        for (k, e) in self.edges.iter().enumerate() {
            inc[e.black].push(k);
            inc[e.white].push(k);
        }
        inc
    }

    pub fn valence(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.black == v || e.white == v).count()
    }

    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let e = &self.edges[e];
        if e.black == v {
            e.white
        } else {
            e.black
        }
    }

    pub fn with_weights(&self, weights: &[f64]) -> Result<Self> {
        if weights.len() != self.edges.len() {
            return Err(Error::Shape(format!("{} weights for {} edges", weights.len(), self.edges.len())));
        }
        let mut g = self.clone();
        for (e, &w) in g.edges.iter_mut().zip(weights) {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::Domain(format!("edge weight {w} must be positive")));
            }
            e.weight = w;
        }
        Ok(g)
    }

    /// Parses the plain-text adjacency listing.
    ///
    /// One vertex per line: `id color x y target:weight[@a,b] ...`, where `color` is `b` or
    /// `w` (suffix `*` marks a boundary vertex), `x y` may both be `-`, and the optional
    /// `@a,b` gives the crossing numbers of the edge. Each edge is listed once, on either
    /// endpoint. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        struct Pending {
            line: usize,
            from: String,
            to: String,
            weight: f64,
            cross: (i32, i32),
        }
        let mut g = Self::new();
        let mut ids: HashMap<String, usize> = HashMap::new();
        let mut pending = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = ln + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let err = |msg: &str| Error::Parse { line, msg: msg.to_string() };
            let tok: Vec<&str> = body.split_whitespace().collect();
            if tok.len() < 4 {
                return Err(err("expected `id color x y` followed by edges"));
            }
            let (color, boundary) = match tok[1] {
                "b" | "B" => (Color::Black, false),
                "w" | "W" => (Color::White, false),
                "b*" | "B*" => (Color::Black, true),
                "w*" | "W*" => (Color::White, true),
                c => return Err(err(&format!("unknown color {c:?}"))),
            };
            let position = match (tok[2], tok[3]) {
                ("-", "-") => None,
                (x, y) => Some((
                    x.parse::<f64>().map_err(|_| err(&format!("bad x coordinate {x:?}")))?,
                    y.parse::<f64>().map_err(|_| err(&format!("bad y coordinate {y:?}")))?,
                )),
            };
            if ids.contains_key(tok[0]) {
                return Err(err(&format!("duplicate vertex id {:?}", tok[0])));
            }
            ids.insert(tok[0].to_string(), g.add_vertex(color, boundary, position));
            for spec in &tok[4..] {
                let (target, rest) = spec.split_once(':').ok_or_else(|| err(&format!("edge {spec:?} lacks a weight")))?;
                let (w, cross) = match rest.split_once('@') {
                    None => (rest, (0, 0)),
                    Some((w, c)) => {
                        let (a, b) = c.split_once(',').ok_or_else(|| err(&format!("crossing {c:?} must be `a,b`")))?;
                        let p = |s: &str| s.parse::<i32>().map_err(|_| err(&format!("bad crossing number {s:?}")));
                        (w, (p(a)?, p(b)?))
                    }
                };
                let weight = w.parse::<f64>().map_err(|_| err(&format!("bad weight {w:?}")))?;
                pending.push(Pending { line, from: tok[0].to_string(), to: target.to_string(), weight, cross });
            }
        }
        for p in pending {
            let to = *ids.get(&p.to).ok_or_else(|| Error::Parse { line: p.line, msg: format!("unknown vertex {:?}", p.to) })?;
            let from = ids[&p.from];
            // crossings are written in the direction of the listing line
            let cross = if g.vertices[from].color == Color::Black { p.cross } else { (-p.cross.0, -p.cross.1) };
            g.add_crossing_edge(from, to, p.weight, cross).map_err(|e| Error::Parse { line: p.line, msg: e.to_string() })?;
        }
        Ok(g)
    }
}
