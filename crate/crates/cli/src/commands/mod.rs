pub mod dimer;
pub mod flow;
pub mod sixv;
pub mod solve;
pub mod tension;
pub mod verify;

use crate::error::CliError;

/// A list `a,b,c` or an inclusive range `lo:hi:n`.
pub fn parse_points(spec: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Config(format!("bad point list {spec:?}; use a,b,c or lo:hi:n"));
    let parts: Vec<&str> = spec.split(':').collect();
    let out = match parts.as_slice() {
        [lo, hi, n] => {
            let (lo, hi): (f64, f64) = (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?);
            let n: usize = n.trim().parse().map_err(|_| bad())?;
            match n {
                0 => return Err(bad()),
                1 => vec![lo],
                _ => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
            }
        }
        [list] => list.split(',').map(|x| x.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<Vec<_>, _>>()?,
        _ => return Err(bad()),
    };
    if out.iter().all(|x| x.is_finite()) {
        Ok(out)
    } else {
        Err(bad())
    }
}
