use clap::Args;
use limitshape::dimers::SpectralCurve;
use limitshape::tension::{hessian_determinant, FreeFermionTension, HexTension, NumericTension, QuadraticTension, SurfaceTension};
use serde::Serialize;
use serde_json::json;

use super::parse_points;
use crate::error::CliError;
use crate::output::{report, Csv, Output};
use crate::{Common, Variant};

#[derive(Args, Debug, Clone, Serialize)]
pub struct TensionArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value = "hex")]
    pub variant: Variant,
    /// Spectral parameters for `ff`; `numeric` uses the free-fermion curve when given.
    #[arg(long, value_delimiter = ',')]
    pub u: Vec<f64>,
    /// Coefficients `a,b,c` of the quadratic tension.
    #[arg(long, value_delimiter = ',', default_value = "1,0,1")]
    pub quadratic: Vec<f64>,
    /// Slopes `s`: `a,b,c` or `lo:hi:n`.
    #[arg(long, default_value = "0.1:0.5:5")]
    pub s: String,
    /// Slopes `t`: `a,b,c` or `lo:hi:n`.
    #[arg(long, default_value = "0.1:0.4:4")]
    pub t: String,
}

/// Tensions labelled by their spectral parameter (NaN when there is none).
pub type Tensions = Vec<(f64, Box<dyn SurfaceTension>)>;

pub fn tensions(variant: Variant, us: &[f64], quadratic: &[f64]) -> Result<Tensions, CliError> {
    let ff = |u: f64| FreeFermionTension::new(u).map_err(|e| CliError::Config(e.to_string()));
    Ok(match variant {
        Variant::Hex => vec![(f64::NAN, Box::new(HexTension) as Box<dyn SurfaceTension>)],
        Variant::Ff => {
            let us = if us.is_empty() { vec![std::f64::consts::FRAC_PI_4] } else { us.to_vec() };
            us.into_iter().map(|u| Ok((u, Box::new(ff(u)?) as Box<dyn SurfaceTension>))).collect::<Result<_, CliError>>()?
        }
        Variant::Numeric => {
            let (u, curve) = match us {
                [] => (f64::NAN, SpectralCurve::hexagonal()),
                [u] => (*u, SpectralCurve::free_fermion(*u)),
                _ => return Err(CliError::Config("numeric takes at most one --u".into())),
            };
            vec![(u, Box::new(NumericTension::new(curve)?) as Box<dyn SurfaceTension>)]
        }
        Variant::Quadratic => match quadratic {
            [a, b, c] => vec![(f64::NAN, Box::new(QuadraticTension::new(*a, *b, *c)?) as Box<dyn SurfaceTension>)],
            _ => return Err(CliError::Config("--quadratic expects a,b,c".into())),
        },
    })
}

pub fn run(a: &TensionArgs) -> Result<(), CliError> {
    let (ss, ts) = (parse_points(&a.s)?, parse_points(&a.t)?);
    let sigmas = tensions(a.variant, &a.u, &a.quadratic)?;
    for (_, sigma) in &sigmas {
        for &s in &ss {
            for &t in &ts {
                if !sigma.contains(s, t) {
                    return Err(CliError::Config(format!("slope ({s}, {t}) outside the {:?} domain", a.variant)));
                }
            }
        }
    }
    let with_u = a.variant == Variant::Ff;
    let mut csv = Csv::new(if with_u {
        &["u", "s", "t", "sigma", "dsds", "dsdt", "detHess"]
    } else {
        &["s", "t", "sigma", "dsds", "dsdt", "detHess"]
    });
    for (u, sigma) in &sigmas {
        for &s in &ss {
            for &t in &ts {
                let g = sigma.gradient(s, t)?;
                let row = [sigma.value(s, t)?, g[0], g[1], hessian_determinant(sigma.as_ref(), s, t)?];
                if with_u {
                    csv.row(&[&[*u, s, t][..], &row].concat());
                } else {
                    csv.row(&[&[s, t][..], &row].concat());
                }
            }
        }
    }
    let mut out = Output::new(&a.common.out);
    out.csv("tension.csv", csv)?;
    let rep = report("tension", a.common.seed, a, vec![], json!({ "rows": ss.len() * ts.len() * sigmas.len(), "files": ["tension.csv"] }));
    out.json("tension.json", &rep)
}
