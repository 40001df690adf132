use clap::Args;
use limitshape::shapes::{el_residual, facet_mask, minimize_action_with, BoundaryData, CylinderGrid, HeightField, SolverOptions};
use limitshape::tension::{partial_legendre, SurfaceTension};
use serde::Serialize;
use serde_json::json;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::PathBuf;

use super::tension::tensions;
use crate::error::CliError;
use crate::output::{num, read_profile, report, simple_check, Csv, Output};
use crate::{Common, Variant};

#[derive(Args, Debug, Clone, Serialize)]
pub struct SolveArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value = "hex")]
    pub variant: Variant,
    #[arg(long, default_value_t = 0.6)]
    pub u: f64,
    /// Coefficients `a,b,c` of the quadratic tension.
    #[arg(long, value_delimiter = ',', default_value = "1,0,1")]
    pub quadratic: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub length: f64,
    #[arg(long, default_value_t = 1.0)]
    pub circumference: f64,
    #[arg(long, default_value_t = 65)]
    pub nx: usize,
    #[arg(long, default_value_t = 64)]
    pub ny: usize,
    /// Profile CSV of the slope `∂_y h` at `x = 0`.
    #[arg(long, requires = "right")]
    pub left: Option<PathBuf>,
    /// Profile CSV of the slope `∂_y h` at `x = length`.
    #[arg(long, requires = "left")]
    pub right: Option<PathBuf>,
    /// Constant slope at both ends.
    #[arg(long, conflicts_with_all = ["left", "right"])]
    pub t0: Option<f64>,
    /// Amplitude of the built-in data `t_c + a sin 2πy/L`, `t_c + a cos 2πy/L`.
    #[arg(long, default_value_t = 0.02)]
    pub amplitude: f64,
    /// Field coupled to the height difference between the ends.
    #[arg(long, default_value_t = 0.0)]
    pub v: f64,
    #[arg(long, default_value_t = 100)]
    pub max_newton: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub facet_margin: f64,
    /// Also solve on the halved mesh and report the observed order of the EL residual.
    #[arg(long)]
    pub mesh_study: bool,
}

enum Data {
    Constant(f64),
    Samples(Vec<(f64, f64)>, Vec<(f64, f64)>),
    Wave(f64, f64),
}

impl Data {
    fn on(&self, g: &CylinderGrid) -> Result<BoundaryData, CliError> {
        Ok(match self {
            Data::Constant(t) => BoundaryData::constant(g.ny, *t),
            Data::Samples(l, r) => BoundaryData::from_samples(g, l, r)?,
            Data::Wave(c, a) => {
                let k = 2.0 * PI / g.circumference;
                BoundaryData::from_fn(g, |y| c + a * (k * y).sin(), |y| c + a * (k * y).cos())
            }
        })
    }
}

struct Solved {
    field: HeightField,
    residual: Vec<f64>,
    mask: Vec<bool>,
    iterations: usize,
    gradient_norm: f64,
    converged: bool,
}

fn solve(grid: CylinderGrid, sigma: &dyn SurfaceTension, bd: &BoundaryData, a: &SolveArgs) -> Result<Solved, CliError> {
    let opts = SolverOptions { tol: a.common.tol.unwrap_or(1e-10), max_newton: a.max_newton, record_action: false };
    let sol = minimize_action_with(grid, sigma, bd, a.v, &opts, None)?;
    let mask = facet_mask(&sol.field, sigma, a.facet_margin);
    let res = el_residual(&sol.field, sigma)?;
    let mut residual = vec![0.0; grid.nodes()];
    for i in 1..grid.nx - 1 {
        for j in 0..grid.ny {
            residual[grid.index(i, j)] = res.get(i, j);
        }
    }
    Ok(Solved { field: sol.field, residual, mask, iterations: sol.iterations, gradient_norm: sol.gradient_norm, converged: sol.converged })
}

fn interior_max(s: &Solved) -> f64 {
    let g = s.field.grid;
    (g.ny..g.nodes() - g.ny).filter(|&k| !s.mask[k]).fold(0.0, |m, k| m.max(s.residual[k].abs()))
}

pub fn run(a: &SolveArgs) -> Result<(), CliError> {
    let grid = CylinderGrid::new(a.length, a.circumference, a.nx, a.ny)?;
    let sigma = tensions(a.variant, &[a.u], &a.quadratic)?.remove(0).1;
    let center = match a.variant {
        Variant::Hex => 1.0 / 3.0,
        Variant::Ff => 0.5,
        _ => sigma.center().1,
    };
    let data = match (&a.left, &a.right, a.t0) {
        (Some(l), Some(r), _) => Data::Samples(read_profile(l)?, read_profile(r)?),
        (_, _, Some(t)) => Data::Constant(t),
        _ => Data::Wave(center, a.amplitude),
    };
    let bd = data.on(&grid)?;
    let s = solve(grid, sigma.as_ref(), &bd, a)?;

    let mut out = Output::new(&a.common.out);
    let mut h = Csv::new(&["x", "y", "h"]);
    let mut r = Csv::new(&["x", "y", "residual"]);
    let mut f = Csv::new(&["x", "y", "facet"]);
    for i in 0..grid.nx {
        for j in 0..grid.ny {
            let (x, y, k) = (grid.x(i), grid.y(j), grid.index(i, j));
            h.row(&[x, y, s.field.values[k]]);
            if i > 0 && i + 1 < grid.nx {
                r.row(&[x, y, s.residual[k]]);
            }
            f.row(&[x, y, s.mask[k] as u8 as f64]);
        }
    }
    out.csv("height.csv", h)?;
    out.csv("residual.csv", r)?;
    out.csv("facets.csv", f)?;

    let mut log = String::new();
    let _ = writeln!(log, "grid {} x {} on [0, {}] x [0, {})", grid.nx, grid.ny, num(a.length), num(a.circumference));
    let _ = writeln!(log, "newton iterations {}", s.iterations);
    let _ = writeln!(log, "gradient norm {}", num(s.gradient_norm));
    let _ = writeln!(log, "converged {}", s.converged);
    let facets = s.mask.iter().filter(|&&m| m).count();
    let _ = writeln!(log, "facet nodes {facets}");
    let el = interior_max(&s);
    let _ = writeln!(log, "max EL residual off facets {}", num(el));

    let mut checks = Vec::new();
    if let Data::Constant(t0) = data {
        let s0 = partial_legendre(sigma.as_ref(), -a.v, t0)?.nu;
        let gap = s.field.max_abs_diff(&HeightField::affine(grid, s0, t0));
        let c = simple_check("analytic_match", gap, 1e-8, false, format!("affine slope ({}, {})", num(s0), num(t0)));
        let _ = writeln!(log, "{} {}", if c["pass"] == true { "analytic-match" } else { "analytic-mismatch" }, num(gap));
        checks.push(c);
    }
    let mut results = json!({ "iterations": s.iterations, "gradient_norm": s.gradient_norm, "converged": s.converged, "facet_nodes": facets, "el_residual": el });
    if a.mesh_study && s.converged {
        let fine = CylinderGrid::new(a.length, a.circumference, 2 * a.nx - 1, 2 * a.ny)?;
        let sf = solve(fine, sigma.as_ref(), &data.on(&fine)?, a)?;
        let el_fine = interior_max(&sf);
        let order = (el / el_fine).log2();
        let _ = writeln!(log, "mesh study {} x {}: residual {} observed order {}", fine.nx, fine.ny, num(el_fine), num(order));
        checks.push(simple_check("mesh_order", order, 1.8, true, format!("grids {}x{} and {}x{}", grid.nx, grid.ny, fine.nx, fine.ny)));
        results["mesh_study"] = json!({ "fine_residual": el_fine, "order": order, "fine_converged": sf.converged });
    }
    out.text("solve.log", &log)?;
    let rep = report("solve", a.common.seed, a, checks, results);
    out.json("solve.json", &rep)?;
    if !s.converged {
        return Err(CliError::NonConvergence(format!("gradient norm {} after {} iterations", num(s.gradient_norm), s.iterations)));
    }
    let failed: Vec<String> = rep["checks"].as_array().into_iter().flatten().filter(|c| c["pass"] != true).map(|c| c["name"].to_string()).collect();
    if !failed.is_empty() {
        return Err(CliError::Verification(failed.join(", ")));
    }
    Ok(())
}
