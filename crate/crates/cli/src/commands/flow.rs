use clap::{Args, ValueEnum};
use limitshape::flow::{conserved_in, hamilton_evolve, BurgersFunction, BurgersSolver, FlowState, HamiltonianDensity};
use limitshape::shapes::{minimize_action, BoundaryData, CylinderGrid};
use limitshape::tension::{grad_sigma_ff, FreeFermionTension, HexTension, SurfaceTension};
use limitshape::Error;
use serde::Serialize;
use serde_json::json;
use std::f64::consts::PI;
use std::path::PathBuf;

use crate::error::CliError;
use crate::output::{num, read_profile, report, simple_check, Csv, Output};
use crate::{Common, Variant};

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Characteristics,
    Hamilton,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct FlowArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// `hex` or `ff`.
    #[arg(long, value_enum, default_value = "hex")]
    pub variant: Variant,
    #[arg(long, default_value_t = 0.6)]
    pub u: f64,
    /// Profile CSV of the initial slope `t(y) = ∂_y h`, sampled at `y_j = j L / n`.
    #[arg(long)]
    pub profile: Option<PathBuf>,
    /// Profile CSV of the initial momentum `p(y)`; constant `--p0` otherwise.
    #[arg(long)]
    pub p_profile: Option<PathBuf>,
    /// Constant initial momentum; the critical value of the tension if omitted.
    #[arg(long)]
    pub p0: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub circumference: f64,
    /// Samples of the built-in profile `t_c + a sin 2πy/L`.
    #[arg(long, default_value_t = 32)]
    pub ny: usize,
    #[arg(long, default_value_t = 0.01)]
    pub amplitude: f64,
    #[arg(long, default_value_t = 0.25)]
    pub horizon: f64,
    /// Number of output slices after `x = 0`.
    #[arg(long, default_value_t = 25)]
    pub samples: usize,
    #[arg(long, value_enum, default_value = "characteristics")]
    pub method: Method,
    /// RK4 steps per output slice for `hamilton`.
    #[arg(long, default_value_t = 10)]
    pub substeps: usize,
    /// Compare the flow reconstruction with the variational minimizer (hex only).
    #[arg(long)]
    pub compare_variational: bool,
}

fn initial_state(a: &FlowArgs) -> Result<FlowState, CliError> {
    let (center, p_crit) = match a.variant {
        Variant::Hex => (1.0 / 3.0, 0.0),
        Variant::Ff => (0.5, grad_sigma_ff(0.5, 0.5, a.u)?[0]),
        v => return Err(CliError::Config(format!("flow supports hex and ff, not {v:?}"))),
    };
    let p0 = a.p0.unwrap_or(p_crit);
    let samples = |path: &PathBuf| -> Result<Vec<f64>, CliError> {
        let prof = read_profile(path)?;
        let n = prof.len();
        for (j, &(y, _)) in prof.iter().enumerate() {
            let expect = j as f64 * a.circumference / n as f64;
            if (y - expect).abs() > 1e-9 * a.circumference {
                return Err(CliError::Config(format!("{}: sample {j} at y = {y}, expected {expect}", path.display())));
            }
        }
        Ok(prof.into_iter().map(|(_, v)| v).collect())
    };
    let t = match &a.profile {
        Some(path) => samples(path)?,
        None => {
            let k = 2.0 * PI / a.circumference;
            (0..a.ny).map(|j| center + a.amplitude * (k * j as f64 * a.circumference / a.ny as f64).sin()).collect()
        }
    };
    let p = match &a.p_profile {
        Some(path) => {
            let p = samples(path)?;
            if p.len() != t.len() {
                return Err(CliError::Config(format!("momentum profile has {} samples, slope profile {}", p.len(), t.len())));
            }
            p
        }
        None => vec![p0; t.len()],
    };
    Ok(FlowState::new(a.circumference, p, t)?)
}

fn evolve(a: &FlowArgs, s: &FlowState, xs: &[f64], sigma: &dyn SurfaceTension, f: &BurgersFunction) -> Result<Vec<FlowState>, Error> {
    match a.method {
        Method::Characteristics => BurgersSolver::new(&s.l(), a.circumference, f.clone())?.states(xs),
        Method::Hamilton => {
            let steps = a.substeps * (xs.len() - 1);
            let tr = hamilton_evolve(s, &HamiltonianDensity::new(sigma), xs[xs.len() - 1], steps.max(1))?;
            Ok(tr.states.into_iter().step_by(a.substeps.max(1)).collect())
        }
    }
}

pub fn run(a: &FlowArgs) -> Result<(), CliError> {
    if !(a.horizon > 0.0 && a.horizon.is_finite()) || a.samples == 0 || a.substeps == 0 {
        return Err(CliError::Config("horizon, samples and substeps must be positive".into()));
    }
    let s = initial_state(a)?;
    let (sigma, f): (Box<dyn SurfaceTension>, BurgersFunction) = match a.variant {
        Variant::Ff => (Box::new(FreeFermionTension::new(a.u)?), BurgersFunction::free_fermion(a.u)?),
        _ => (Box::new(HexTension), BurgersFunction::hex()),
    };
    let xs: Vec<f64> = (0..=a.samples).map(|k| a.horizon * k as f64 / a.samples as f64).collect();
    let (states, shock) = match evolve(a, &s, &xs, sigma.as_ref(), &f) {
        Ok(v) => (v, None),
        Err(Error::Shock { x, increment }) => {
            let before: Vec<f64> = xs.iter().copied().take_while(|&v| v < x).collect();
            let states = if before.len() > 1 { evolve(a, &s, &before, sigma.as_ref(), &f).unwrap_or_else(|_| vec![s.clone()]) } else { vec![s.clone()] };
            (states, Some((x, increment)))
        }
        Err(e) => return Err(e.into()),
    };

    let mut traj = Csv::new(&["x", "y", "p", "t", "re_l", "im_l"]);
    let mut series = Vec::new();
    let i0: Vec<_> = (1..=4).map(|n| conserved_in(&s, n)).collect::<Result<_, _>>()?;
    let mut drift = [0.0f64; 4];
    for (x, st) in xs.iter().zip(&states) {
        for j in 0..st.ny() {
            traj.row(&[*x, st.y(j), st.p[j], st.t[j], st.p[j], PI * st.t[j]]);
        }
        let mut moments = Vec::new();
        for n in 1..=4u32 {
            let i = conserved_in(st, n)?;
            let k = n as usize - 1;
            let rel = if i0[k].norm() > 0.0 { (i - i0[k]).norm() / i0[k].norm() } else { (i - i0[k]).norm() };
            drift[k] = drift[k].max(rel);
            moments.push(json!([i.re, i.im]));
        }
        series.push(json!({ "x": x, "moments": moments }));
    }
    let tol = a.common.tol.unwrap_or(1e-6);
    let mut checks: Vec<_> =
        drift.iter().enumerate().map(|(k, &d)| simple_check(&format!("drift_I{}", k + 1), d, tol, false, format!("x in [0, {}]", num(xs[states.len() - 1])))).collect();
    let mut results = json!({
        "method": a.method,
        "reached": xs[states.len() - 1],
        "horizon": a.horizon,
        "series": series,
        "max_relative_drift": drift,
    });
    if let Some((x, inc)) = shock {
        results["shock"] = json!({ "x": x, "increment": inc });
    }
    if a.compare_variational && shock.is_none() {
        if a.variant != Variant::Hex {
            return Err(CliError::Config("--compare-variational supports the hex variant".into()));
        }
        let gap = compare_variational(a, &s)?;
        checks.push(simple_check("compare_variational", gap, 1e-3, false, format!("grid {}x{}", s.ny() + 1, s.ny())));
        results["compare_variational"] = json!(gap);
    }
    let mut out = Output::new(&a.common.out);
    out.csv("trajectory.csv", traj)?;
    out.json("conservation.json", &report("flow", a.common.seed, a, checks, results))?;
    if let Some((x, inc)) = shock {
        return Err(CliError::Shock(format!("x = {} (increment {})", num(x), num(inc))));
    }
    Ok(())
}

/// Sup distance between the flow reconstruction and the minimizer with the flow's boundary slopes.
fn compare_variational(a: &FlowArgs, s: &FlowState) -> Result<f64, CliError> {
    let n = s.ny();
    let b = BurgersSolver::new(&s.l(), a.circumference, BurgersFunction::hex())?;
    let g = CylinderGrid::new(a.horizon, a.circumference, n + 1, n)?;
    let rec = b.reconstruct(&HamiltonianDensity::new(&HexTension), g)?;
    let mid = |x: f64| (0..n).map(|j| b.eval(x, (j as f64 + 0.5) * g.hy()).map(|l| l.im / PI)).collect::<Result<Vec<f64>, Error>>();
    let bd = BoundaryData { left: mid(0.0)?, right: mid(a.horizon)? };
    let sol = minimize_action(g, &HexTension, &bd, 0.0)?;
    Ok(sol.field.max_abs_diff(&rec))
}
