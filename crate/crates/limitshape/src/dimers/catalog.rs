//! Small planar test graphs with straight-line drawings.

use super::graph::{BipartiteGraph, Color};
use super::matching::DimerConfig;
use crate::Result;
use std::f64::consts::PI;

fn color(parity: usize) -> Color {
    if parity % 2 == 0 {
        Color::Black
    } else {
        Color::White
    }
}

/// One edge whose two ends are boundary vertices.
pub fn single_edge(weight: f64) -> Result<BipartiteGraph> {
    let mut g = BipartiteGraph::new();
    let b = g.add_vertex(Color::Black, true, Some((0.0, 0.0)));
    let w = g.add_vertex(Color::White, true, Some((1.0, 0.0)));
    g.add_edge(b, w, weight)?;
    Ok(g)
}

/// The prism over a `k`-gon, `k` even: two concentric cycles joined by spokes.
pub fn prism(k: usize, weights: &[f64]) -> Result<BipartiteGraph> {
    assert!(k >= 4 && k % 2 == 0, "prism needs an even polygon");
    let mut g = BipartiteGraph::new();
    let ang = |i: usize| 2.0 * PI * i as f64 / k as f64;
    let outer: Vec<usize> = (0..k).map(|i| g.add_vertex(color(i), false, Some((2.0 * ang(i).cos(), 2.0 * ang(i).sin())))).collect();
    let inner: Vec<usize> = (0..k).map(|i| g.add_vertex(color(i + 1), false, Some((ang(i).cos(), ang(i).sin())))).collect();
    let mut wt = weights.iter().copied().cycle();
    for i in 0..k {
        g.add_edge(outer[i], outer[(i + 1) % k], wt.next().unwrap_or(1.0))?;
        g.add_edge(inner[i], inner[(i + 1) % k], wt.next().unwrap_or(1.0))?;
        g.add_edge(outer[i], inner[i], wt.next().unwrap_or(1.0))?;
    }
    Ok(g)
}

/// A brick-wall patch of the honeycomb lattice, `rows × cols` trivalent vertices, with a
/// dangling edge to a boundary vertex wherever a neighbour is missing.
pub fn brick_wall(rows: usize, cols: usize, weights: &[f64]) -> Result<BipartiteGraph> {
    let mut g = BipartiteGraph::new();
    let id = |r: usize, c: usize| r * cols + c;
    for r in 0..rows {
        for c in 0..cols {
            g.add_vertex(color(r + c), false, Some((c as f64, r as f64)));
        }
    }
    let mut wt = weights.iter().copied().cycle();
    let up = |r: usize, c: usize| (r + c) % 2 == 0;
    for r in 0..rows {
        for c in 0..cols {
            let v = id(r, c);
            let (x, y) = (c as f64, r as f64);
            let mut dangle = |g: &mut BipartiteGraph, dx: f64, dy: f64| -> Result<()> {
                let d = g.add_vertex(color(r + c + 1), true, Some((x + 0.6 * dx, y + 0.6 * dy)));
                g.add_edge(v, d, wt.next().unwrap_or(1.0))?;
                Ok(())
            };
            if c == 0 {
                dangle(&mut g, -1.0, 0.0)?;
            }
            if c + 1 == cols {
                dangle(&mut g, 1.0, 0.0)?;
            }
            if up(r, c) && r + 1 == rows {
                dangle(&mut g, 0.0, 1.0)?;
            }
            if !up(r, c) && r == 0 {
                dangle(&mut g, 0.0, -1.0)?;
            }
        }
    }
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                g.add_edge(id(r, c), id(r, c + 1), wt.next().unwrap_or(1.0))?;
            }
            if up(r, c) && r + 1 < rows {
                g.add_edge(id(r, c), id(r + 1, c), wt.next().unwrap_or(1.0))?;
            }
        }
    }
    Ok(g)
}

/// Two trivalent vertices joined by the `α` edge, each with two dangling edges: `β` to the
/// west and east, `γ` to the south and north. Its five matchings have weights
/// `α, β², γ², βγ, γβ`.
pub fn five_vertex_gadget(alpha: f64, beta: f64, gamma: f64) -> Result<BipartiteGraph> {
    let mut g = BipartiteGraph::new();
    let d0 = g.add_vertex(Color::Black, false, Some((-0.25, -0.25)));
    let d1 = g.add_vertex(Color::White, false, Some((0.25, 0.25)));
    let west = g.add_vertex(Color::White, true, Some((-1.0, -0.25)));
    let south = g.add_vertex(Color::White, true, Some((-0.25, -1.0)));
    let east = g.add_vertex(Color::Black, true, Some((1.0, 0.25)));
    let north = g.add_vertex(Color::Black, true, Some((0.25, 1.0)));
    g.add_edge(d0, d1, alpha)?;
    g.add_edge(d0, west, beta)?;
    g.add_edge(d1, east, beta)?;
    g.add_edge(d0, south, gamma)?;
    g.add_edge(d1, north, gamma)?;
    Ok(g)
}

/// The twelve-vertex graph of the composition-cycle figure, with its two matchings
/// `(D0, D)`. Vertices are `b0..b5` then `w0..w5`.
pub fn composition_cycle_example() -> Result<(BipartiteGraph, DimerConfig, DimerConfig)> {
    let black = [(-0.8, 0.1), (0.1, -0.1), (0.4, 0.8), (0.3, -1.0), (1.0, 0.1), (1.3, -0.7)];
    let white = [(-0.2, 0.6), (-0.4, -0.65), (0.5, -0.5), (0.7, 0.5), (1.0, -1.1), (1.3, -0.3)];
    let mut g = BipartiteGraph::new();
    for &p in &black {
        g.add_vertex(Color::Black, false, Some(p));
    }
    for &p in &white {
        g.add_vertex(Color::White, false, Some(p));
    }
    let pairs = [
        (0, 1),
        (1, 1),
        (1, 0),
        (0, 0),
        (1, 2),
        (3, 2),
        (3, 1),
        (4, 2),
        (4, 3),
        (2, 3),
        (2, 0),
        (3, 4),
        (5, 4),
        (5, 5),
        (4, 5),
    ];
    for &(b, w) in &pairs {
        g.add_edge(b, 6 + w, 1.0)?;
    }
    let pick = |sel: &[(usize, usize)]| {
        let edges: Vec<usize> = sel.iter().map(|p| pairs.iter().position(|q| q == p).expect("edge exists")).collect();
        DimerConfig::from_edges(pairs.len(), &edges)
    };
    let d0 = pick(&[(0, 0), (1, 1), (3, 2), (4, 5), (5, 4), (2, 3)]);
    let d = pick(&[(0, 1), (1, 0), (3, 4), (5, 5), (4, 2), (2, 3)]);
    Ok((g, d0, d))
}
