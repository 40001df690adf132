use super::embedding::PlanarEmbedding;
use super::graph::BipartiteGraph;
use super::matching::{is_matching, DimerConfig};
use crate::{Error, Result};

/// Height function on faces; `None` marks faces bounded by no edge.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceHeight {
    pub values: Vec<Option<f64>>,
}

impl FaceHeight {
    pub fn get(&self, f: usize) -> Option<f64> {
        self.values[f]
    }

    /// Left minus right value across every edge, sides taken black to white.
    pub fn steps(&self, emb: &PlanarEmbedding) -> Vec<f64> {
        emb.left
            .iter()
            .zip(&emb.right)
            .map(|(&l, &r)| self.values[l].unwrap_or(f64::NAN) - self.values[r].unwrap_or(f64::NAN))
            .collect()
    }
}

fn check_config(g: &BipartiteGraph, emb: &PlanarEmbedding, d: &DimerConfig) -> Result<()> {
    if emb.left.len() != g.n_edges() {
        return Err(Error::Shape(format!("embedding covers {} of {} edges", emb.left.len(), g.n_edges())));
    }
    if !is_matching(g, d) {
        return Err(Error::Inconsistent("configuration is not a matching of the graph".into()));
    }
    Ok(())
}

/// Height of `d` relative to `d0`: crossing an edge from its right to its left side (black
/// to white orientation) raises the height by `1_D − 1_{D0}`; zero on the reference face.
pub fn relative_height(g: &BipartiteGraph, emb: &PlanarEmbedding, d: &DimerConfig, d0: &DimerConfig) -> Result<FaceHeight> {
    check_config(g, emb, d)?;
    check_config(g, emb, d0)?;
    let step: Vec<f64> = d.difference(d0).into_iter().map(f64::from).collect();
    Ok(FaceHeight { values: emb.integrate(&step, emb.reference_face(), 0.0)? })
}

fn check_trivalent(g: &BipartiteGraph) -> Result<()> {
    for v in 0..g.n_vertices() {
        let expected = if g.vertices[v].boundary { 1 } else { 3 };
        if g.valence(v) != expected {
            return Err(Error::NotTrivalent(v));
        }
    }
    Ok(())
}

/// Height of `d` relative to the uniform cover by thirds, scaled by 3/2.
///
/// With edges oriented white to black, `θ(e_L) − θ(e_R) = 1` on dimers and `−1/2` elsewhere.
pub fn trivalent_height(g: &BipartiteGraph, emb: &PlanarEmbedding, d: &DimerConfig, reference: usize) -> Result<FaceHeight> {
    check_trivalent(g)?;
    check_config(g, emb, d)?;
    if reference >= emb.n_faces {
        return Err(Error::Domain(format!("reference face {reference} out of range")));
    }
    // black-to-white steps are the negatives of the white-to-black ones
    let step: Vec<f64> = d.occupied.iter().map(|&o| if o { -1.0 } else { 0.5 }).collect();
    Ok(FaceHeight { values: emb.integrate(&step, reference, 0.0)? })
}

/// `∏_e w(e)^{1/3} · ∏_f q_f^{2θ(f)/3}` with `q_f = ∏_{e ⊂ ∂f} w(e)^{ε(e, f)}`, evaluated in
/// log space; `ε = +1` on the left of an edge oriented white to black, `−1` on its right.
pub fn weight_from_height(theta: &FaceHeight, g: &BipartiteGraph, emb: &PlanarEmbedding) -> Result<f64> {
    let mut log_q = vec![0.0; emb.n_faces];
    let mut log_w = 0.0;
    for (e, edge) in g.edges.iter().enumerate() {
        let lw = edge.weight.ln();
        log_w += lw / 3.0;
        // left of white -> black is right of black -> white
        log_q[emb.right[e]] += lw;
        log_q[emb.left[e]] -= lw;
    }
    let mut total = log_w;
    for (f, &lq) in log_q.iter().enumerate() {
        if lq != 0.0 {
            let t = theta.values[f].ok_or_else(|| Error::Inconsistent(format!("face {f} has no height")))?;
            total += 2.0 * t / 3.0 * lq;
        }
    }
    Ok(total.exp())
}

/// `θ^dimer = θ^6v + x/2 + y/2`.
pub fn height_relation_6v_dimer(theta_6v: f64, x: f64, y: f64) -> f64 {
    theta_6v + x / 2.0 + y / 2.0
}
