use super::lattice::{Domain, DomainKind, SixVertexState};
use crate::{Error, Result};

/// Face grid underlying a height function.
///
/// Face `(j, i)` lies west of vertex column `j` and south of vertex row `i`, so vertex
/// `(j, i)` has faces `(j, i)`, `(j+1, i)`, `(j, i+1)`, `(j+1, i+1)` at SW, SE, NW, NE.
/// On a cylinder the face rows are periodic and the cut separates row `n − 1` from row `0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeightDomain {
    Planar { m: usize, n: usize },
    Cylinder { m: usize, n: usize },
}

impl HeightDomain {
    fn face_rows(&self) -> usize {
        match *self {
            HeightDomain::Planar { n, .. } => n + 1,
            HeightDomain::Cylinder { n, .. } => n,
        }
    }

    fn face_cols(&self) -> usize {
        match *self {
            HeightDomain::Planar { m, .. } | HeightDomain::Cylinder { m, .. } => m + 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeHeight {
    pub domain: HeightDomain,
    pub values: Vec<f64>,
    /// Height gained going once around a cylinder; zero on planar domains.
    pub monodromy: f64,
}

impl LatticeHeight {
    pub fn face(&self, j: usize, i: usize) -> f64 {
        self.values[j * self.domain.face_rows() + i]
    }

    fn set(&mut self, j: usize, i: usize, x: f64) {
        let r = self.domain.face_rows();
        self.values[j * r + i] = x;
    }
}

#[inline]
fn step(occupied: bool) -> f64 {
    if occupied {
        0.5
    } else {
        -0.5
    }
}

fn decode(d: f64) -> Result<bool> {
    if (d - 0.5).abs() < 1e-9 {
        Ok(true)
    } else if (d + 0.5).abs() < 1e-9 {
        Ok(false)
    } else {
        Err(Error::Inconsistent(format!("height step {d} is not ±1/2")))
    }
}

fn height_domain(domain: &Domain) -> Result<HeightDomain> {
    match domain.kind {
        DomainKind::Planar { m, n } => Ok(HeightDomain::Planar { m, n }),
        DomainKind::Cylinder { m, n } => Ok(HeightDomain::Cylinder { m, n }),
        _ => Err(Error::Domain("height functions need a planar block or a cut cylinder".into())),
    }
}

/// Integrates a state to its height function.
///
/// Going north across a horizontal edge, or east across a vertical edge, the height rises
/// by 1/2 if the edge is occupied and falls by 1/2 otherwise.
pub fn state_to_height(
    domain: &Domain,
    state: &SixVertexState,
    reference_face: (usize, usize),
    reference_value: f64,
) -> Result<LatticeHeight> {
    let hd = height_domain(domain)?;
    let occ = |e: usize| state.occupied[e];
    let (cols, rows) = (hd.face_cols(), hd.face_rows());
    let (m, n) = (cols - 1, match hd {
        HeightDomain::Planar { n, .. } | HeightDomain::Cylinder { n, .. } => n,
    });
    let cyl = matches!(hd, HeightDomain::Cylinder { .. });
    let mut h = LatticeHeight { domain: hd, values: vec![0.0; cols * rows], monodromy: 0.0 };
    for i in 1..rows {
        h.set(0, i, h.face(0, i - 1) + step(occ(domain.h_edge(0, i - 1))));
    }
    for j in 0..m {
        for i in 0..rows {
            h.set(j + 1, i, h.face(j, i) + step(occ(domain.v_edge(j, i))));
        }
    }
    if cyl {
        h.monodromy = (0..n).map(|i| step(occ(domain.h_edge(0, i)))).sum();
    }
    for j in 0..cols {
        for i in 0..n {
            let above = if i + 1 < rows { h.face(j, i + 1) } else { h.face(j, 0) + h.monodromy };
            let d = above - h.face(j, i);
            if (d - step(occ(domain.h_edge(j, i)))).abs() > 1e-12 {
                return Err(Error::Inconsistent(format!("ice rule violated next to face ({j}, {i})")));
            }
        }
    }
    let (rj, ri) = reference_face;
    if rj >= cols || ri >= rows {
        return Err(Error::Domain(format!("reference face ({rj}, {ri}) outside the face grid")));
    }
    let shift = reference_value - h.face(rj, ri);
    h.values.iter_mut().for_each(|x| *x += shift);
    Ok(h)
}

/// Recovers the state from a height function, checking every step is ±1/2.
pub fn height_to_state(domain: &Domain, h: &LatticeHeight) -> Result<SixVertexState> {
    let hd = height_domain(domain)?;
    if hd != h.domain {
        return Err(Error::Shape("height function and domain differ".into()));
    }
    let (cols, rows) = (hd.face_cols(), hd.face_rows());
    let n = match hd {
        HeightDomain::Planar { n, .. } | HeightDomain::Cylinder { n, .. } => n,
    };
    let mut occupied = vec![false; domain.n_edges];
    for j in 0..cols {
        for i in 0..n {
            let above = if i + 1 < rows { h.face(j, i + 1) } else { h.face(j, 0) + h.monodromy };
            occupied[domain.h_edge(j, i)] = decode(above - h.face(j, i))?;
        }
    }
    for j in 0..cols - 1 {
        for i in 0..rows {
            occupied[domain.v_edge(j, i)] = decode(h.face(j + 1, i) - h.face(j, i))?;
        }
    }
    let state = SixVertexState { occupied };
    for p in &domain.vertices {
        let o = |e: usize| state.occupied[e] as u8;
        if o(p.west) + o(p.north) != o(p.east) + o(p.south) {
            return Err(Error::Inconsistent("recovered state violates the ice rule".into()));
        }
    }
    Ok(state)
}
