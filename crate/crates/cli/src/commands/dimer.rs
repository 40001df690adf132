use clap::{Args, ValueEnum};
use limitshape::dimers::{
    characteristic_polynomial, config_weight, curves_equal_mod_units, enumerate_matchings, ff_weights_to_city, match_mod_units,
    trivalent_height, weight_from_height, BipartiteGraph, CityWeights, FundamentalDomain, PlanarEmbedding, SpectralCurve,
};
use limitshape::Error;
use serde::Serialize;
use serde_json::json;
use std::path::PathBuf;

use crate::error::CliError;
use crate::output::{num, report, simple_check, Csv, Output};
use crate::Common;

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Cell {
    Hex,
    City,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct DimerArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Toric fundamental domain whose characteristic polynomial is computed.
    #[arg(long, value_enum, default_value = "hex")]
    pub cell: Cell,
    /// Edge weights: three for `hex`; `α1..α4,β1,β2,γ` for `city`.
    #[arg(long, value_delimiter = ',')]
    pub weights: Vec<f64>,
    /// Free-fermion city weights `(cos u, sin u, 1)`; compared with its free-fermion curve.
    #[arg(long, conflicts_with = "weights")]
    pub u: Option<f64>,
    /// Planar graph listing; enumerates its matchings instead.
    #[arg(long)]
    pub graph: Option<PathBuf>,
}

fn terms(p: &SpectralCurve) -> Vec<serde_json::Value> {
    p.terms().map(|((i, j), c)| json!([i, j, c])).collect()
}

pub fn run(a: &DimerArgs) -> Result<(), CliError> {
    let mut out = Output::new(&a.common.out);
    let tol = a.common.tol.unwrap_or(1e-10);
    let (checks, results) = match &a.graph {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            matchings(&BipartiteGraph::parse(&text)?, tol, &mut out)?
        }
        None => curve(a)?,
    };
    let rep = report("dimer", a.common.seed, a, checks, results);
    out.json("dimer.json", &rep)?;
    if rep["pass"] == true {
        Ok(())
    } else {
        Err(CliError::Verification("dimer checks".into()))
    }
}

fn curve(a: &DimerArgs) -> Result<(Vec<serde_json::Value>, serde_json::Value), CliError> {
    let mut checks = Vec::new();
    let p = match a.cell {
        Cell::Hex => {
            let w: [f64; 3] = match a.weights.as_slice() {
                [] => [1.0; 3],
                &[x, y, z] => [x, y, z],
                _ => return Err(CliError::Config("hex takes three weights".into())),
            };
            let p = characteristic_polynomial(&FundamentalDomain::hexagonal(w)?)?;
            if w == [1.0; 3] {
                let ok = curves_equal_mod_units(&p, &SpectralCurve::hexagonal());
                checks.push(simple_check("equals_1-z-w", (!ok) as u8 as f64, 0.0, false, "unit weights"));
            }
            p
        }
        Cell::City => {
            let cw = match (a.u, a.weights.as_slice()) {
                (Some(u), _) => ff_weights_to_city(u.cos(), u.sin(), 1.0)?,
                (None, []) => CityWeights::uniform(1.0, 1.0, 1.0),
                (None, &[a1, a2, a3, a4, b1, b2, g]) => CityWeights { alpha: [a1, a2, a3, a4], beta: [b1, b2], gamma: g },
                _ => return Err(CliError::Config("city takes seven weights α1..α4,β1,β2,γ".into())),
            };
            let p = characteristic_polynomial(&FundamentalDomain::dimer_city(&cw)?)?;
            if let Some(u) = a.u {
                let v = match_mod_units(&p, &SpectralCurve::free_fermion(u));
                checks.push(simple_check("matches_free_fermion_curve", v.is_none() as u8 as f64, 0.0, false, format!("u = {}", num(u))));
            }
            p
        }
    };
    Ok((checks, json!({ "curve": terms(&p), "newton_z_range": p.z_range(), "newton_w_range": p.w_range() })))
}

fn matchings(g: &BipartiteGraph, tol: f64, out: &mut Output) -> Result<(Vec<serde_json::Value>, serde_json::Value), CliError> {
    let ms = enumerate_matchings(g)?;
    let emb = PlanarEmbedding::from_coordinates(g).ok();
    let mut csv = Csv::new(&["index", "weight", "height_weight"]);
    let (mut worst, mut z, mut trivalent) = (0.0f64, 0.0, emb.is_some());
    for (k, d) in ms.iter().enumerate() {
        let w = config_weight(g, d);
        z += w;
        let hw = match &emb {
            Some(e) => match trivalent_height(g, e, d, e.reference_face()) {
                Ok(theta) => weight_from_height(&theta, g, e)?,
                Err(Error::NotTrivalent(_)) => {
                    trivalent = false;
                    f64::NAN
                }
                Err(err) => return Err(err.into()),
            },
            None => f64::NAN,
        };
        if hw.is_finite() {
            worst = worst.max((hw - w).abs() / w.abs().max(f64::MIN_POSITIVE));
        }
        csv.row(&[k as f64, w, hw]);
    }
    out.csv("matchings.csv", csv)?;
    let mut checks = Vec::new();
    if trivalent && !ms.is_empty() {
        checks.push(simple_check("height_weight_formula", worst, tol, false, format!("{} matchings", ms.len())));
    }
    Ok((checks, json!({ "matchings": ms.len(), "partition_function": z, "trivalent": trivalent })))
}
