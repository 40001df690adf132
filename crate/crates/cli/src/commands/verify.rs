use clap::Args;
use limitshape::suites::{run_suite, Suite, SuiteConfig};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::output::{check_json, report, Output};
use crate::Common;

#[derive(Args, Debug, Clone, Serialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Comma-separated suites, or `all`.
    #[arg(long, default_value = "all", value_delimiter = ',')]
    pub suite: Vec<String>,
    /// Largest row count for `commute`.
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    /// Largest vertex count for `oracle`.
    #[arg(long, default_value_t = 9)]
    pub max_cells: usize,
    /// Random weight tuples for `oracle`.
    #[arg(long, default_value_t = 20)]
    pub tuples: usize,
    /// Spectral parameters of one free-fermion pair for `poisson`.
    #[arg(long, requires = "v")]
    pub u: Option<f64>,
    #[arg(long, requires = "u")]
    pub v: Option<f64>,
    /// Grid size of the minimizer comparison in `equivalence`.
    #[arg(long, default_value_t = 128)]
    pub resolution: usize,
}

fn suites(names: &[String]) -> Result<Vec<Suite>, CliError> {
    if names.iter().any(|n| n == "all") {
        return Ok(Suite::ALL.to_vec());
    }
    let mut out = Vec::new();
    for n in names {
        let s: Suite = n.parse().map_err(|e: limitshape::Error| CliError::Config(e.to_string()))?;
        if !out.contains(&s) {
            out.push(s);
        }
    }
    Ok(out)
}

pub fn run(a: &VerifyArgs) -> Result<(), CliError> {
    let list = suites(&a.suite)?;
    if !(1..=12).contains(&a.n) {
        return Err(CliError::Config(format!("--n {} outside 1..=12", a.n)));
    }
    if a.max_cells > 12 {
        return Err(CliError::Config(format!("--max-cells {} exceeds 12", a.max_cells)));
    }
    if a.resolution < 8 {
        return Err(CliError::Config("--resolution must be at least 8".into()));
    }
    if let (Some(u), Some(v)) = (a.u, a.v) {
        for x in [u, v] {
            if !(x > 0.0 && x < std::f64::consts::FRAC_PI_2) {
                return Err(CliError::Config(format!("spectral parameter {x} outside (0, pi/2)")));
            }
        }
    }
    if a.common.tol.is_some_and(|t| !(t > 0.0)) {
        return Err(CliError::Config("--tol must be positive".into()));
    }
    let cfg = SuiteConfig {
        seed: a.common.seed,
        tol: a.common.tol,
        max_rows: a.n,
        max_cells: a.max_cells,
        tuples: a.tuples,
        pair: a.u.zip(a.v),
        resolution: a.resolution,
    };
    let mut checks = Vec::new();
    let mut per_suite = Vec::new();
    for s in list {
        let r = run_suite(s, &cfg);
        per_suite.push(json!({ "suite": s.name(), "criteria": s.criteria(), "pass": r.pass() }));
        checks.extend(r.checks.iter().map(check_json));
    }
    let rep = report("verify", a.common.seed, a, checks, Value::Array(per_suite));
    let mut out = Output::new(&a.common.out);
    out.json("verify.json", &rep)?;
    let failed: Vec<&str> =
        rep["checks"].as_array().into_iter().flatten().filter(|c| c["pass"] != true).filter_map(|c| c["name"].as_str()).collect();
    for c in rep["checks"].as_array().into_iter().flatten() {
        println!("{} {} = {} ({} {})", if c["pass"] == true { "PASS" } else { "FAIL" }, c["name"], c["measured"], c["bound"].as_str().unwrap_or(""), c["tolerance"]);
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(failed.join(", ")))
    }
}
