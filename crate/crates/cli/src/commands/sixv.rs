use clap::Args;
use limitshape::sixvertex::{
    cylinder_partition, enumerate_states, state_weight, torus_partition, BoundaryWord, Domain, VertexWeights, MAX_ENUMERATION_EDGES,
};
use serde::Serialize;
use serde_json::json;

use crate::error::CliError;
use crate::output::{report, simple_check, Csv, Output};
use crate::Common;

#[derive(Args, Debug, Clone, Serialize)]
pub struct SixvArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Columns `M`.
    #[arg(long, default_value_t = 3)]
    pub cols: usize,
    /// Rows `N`.
    #[arg(long, default_value_t = 3)]
    pub rows: usize,
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Horizontal field.
    #[arg(long, default_value_t = 0.0)]
    pub h: f64,
    /// Vertical field.
    #[arg(long, default_value_t = 0.0)]
    pub v: f64,
    /// Free-fermion weights `(cos u, sin u, 1)` instead of `a, b, c`.
    #[arg(long)]
    pub u: Option<f64>,
}

pub fn run(a: &SixvArgs) -> Result<(), CliError> {
    let (m, n) = (a.cols, a.rows);
    if m == 0 || !(1..=10).contains(&n) {
        return Err(CliError::Config(format!("need cols >= 1 and 1 <= rows <= 10, got {m} x {n}")));
    }
    let w = match a.u {
        Some(u) => VertexWeights::free_fermion(u)?.fields(a.h, a.v)?,
        None => VertexWeights::with_fields(a.a, a.b, a.c, a.h, a.v)?,
    };
    let z_torus = torus_partition(m, n, &w)?;
    let mut csv = Csv::new(&["eta1", "eta2", "Z"]);
    for e1 in 0..1usize << n {
        for e2 in 0..1usize << n {
            if e1.count_ones() == e2.count_ones() {
                let z = cylinder_partition(m, n, &w, &BoundaryWord::from_index(e1, n), &BoundaryWord::from_index(e2, n))?;
                csv.row(&[e1 as f64, e2 as f64, z]);
            }
        }
    }
    let mut checks = Vec::new();
    let d = Domain::torus(m, n);
    if d.n_edges <= MAX_ENUMERATION_EDGES && m * n <= 12 {
        let brute: f64 = enumerate_states(&d)?.iter().map(|s| state_weight(&d, s, &w)).sum();
        let rel = (z_torus - brute).abs() / brute.abs().max(f64::MIN_POSITIVE);
        checks.push(simple_check("torus_vs_enumeration", rel, a.common.tol.unwrap_or(1e-12), false, format!("{m}x{n} {w}")));
    }
    let mut out = Output::new(&a.common.out);
    out.csv("cylinder.csv", csv)?;
    let rep = report("sixv", a.common.seed, a, checks, json!({ "delta": w.delta(), "torus_partition": z_torus }));
    out.json("sixv.json", &rep)?;
    if rep["pass"] == true {
        Ok(())
    } else {
        Err(CliError::Verification("torus_vs_enumeration".into()))
    }
}
