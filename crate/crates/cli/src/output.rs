use serde::Serialize;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use crate::error::CliError;
use limitshape::suites::Check;

/// Full-precision rendering: 17 significant digits.
pub fn num(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self { text: header.join(",") + "\n" }
    }

    pub fn row(&mut self, values: &[f64]) {
        let cells: Vec<String> = values.iter().map(|&v| num(v)).collect();
        let _ = writeln!(self.text, "{}", cells.join(","));
    }

    pub fn into_string(self) -> String {
        self.text
    }
}

/// Writes to a temporary sibling and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(io)?;
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = dir.join(format!(".{name}.tmp{}", std::process::id()));
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(contents).map_err(io)?;
    f.sync_all().map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

pub struct Output {
    pub dir: PathBuf,
    pub written: Vec<String>,
}

impl Output {
    pub fn new(dir: &Path) -> Self {
        Self { dir: dir.to_path_buf(), written: Vec::new() }
    }

    pub fn text(&mut self, name: &str, contents: &str) -> Result<(), CliError> {
        write_atomic(&self.dir.join(name), contents.as_bytes())?;
        self.written.push(name.into());
        Ok(())
    }

    pub fn csv(&mut self, name: &str, csv: Csv) -> Result<(), CliError> {
        self.text(name, &csv.into_string())
    }

    pub fn json(&mut self, name: &str, value: &Value) -> Result<(), CliError> {
        let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
        s.push('\n');
        self.text(name, &s)
    }
}

pub fn check_json(c: &Check) -> Value {
    json!({
        "name": c.name,
        "criterion": c.criterion,
        "measured": c.measured,
        "tolerance": c.tolerance,
        "bound": c.bound.symbol(),
        "pass": c.pass,
        "inputs": c.inputs,
    })
}

/// A standalone check built by a command.
pub fn simple_check(name: &str, measured: f64, tolerance: f64, at_least: bool, inputs: impl Into<String>) -> Value {
    let pass = measured.is_finite() && if at_least { measured >= tolerance } else { measured <= tolerance };
    json!({
        "name": name,
        "measured": measured,
        "tolerance": tolerance,
        "bound": if at_least { ">=" } else { "<=" },
        "pass": pass,
        "inputs": inputs.into(),
    })
}

pub fn all_pass(checks: &[Value]) -> bool {
    checks.iter().all(|c| c["pass"].as_bool() == Some(true))
}

/// The common report envelope.
pub fn report(command: &str, seed: u64, config: &impl Serialize, checks: Vec<Value>, results: Value) -> Value {
    json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "seed": seed,
        "config": serde_json::to_value(config).unwrap_or(Value::Null),
        "pass": all_pass(&checks),
        "checks": checks,
        "results": results,
    })
}

/// Reads a profile CSV: a header row, then `y,value` lines.
pub fn read_profile(path: &Path) -> Result<Vec<(f64, f64)>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate().skip(1) {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = || CliError::Config(format!("{}:{}: expected `y,value`, got {line:?}", path.display(), k + 1));
        let mut it = line.split(',').map(|s| s.trim().parse::<f64>());
        match (it.next(), it.next(), it.next()) {
            (Some(Ok(y)), Some(Ok(v)), None) if y.is_finite() && v.is_finite() => out.push((y, v)),
            _ => return Err(bad()),
        }
    }
    if out.is_empty() {
        return Err(CliError::Config(format!("{}: no samples", path.display())));
    }
    Ok(out)
}
