use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameters outside the admissible domain: {0}")]
    Domain(String),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("problem too large: {0}")]
    TooLarge(String),
    #[error("inconsistent configuration: {0}")]
    Inconsistent(String),
    #[error("graph is not trivalent at vertex {0}")]
    NotTrivalent(usize),
    #[error("graph admits no perfect matching")]
    NoMatching,
    #[error("spectral curve vanishes on the integration torus")]
    SingularLocus,
    #[error("argument {0} lies on the dilogarithm branch cut")]
    BranchCut(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("maximization is unbounded: {0}")]
    Unbounded(String),
    #[error("slope ({0}, {1}) outside the tension domain")]
    OutOfSlopeDomain(f64, f64),
    #[error("boundary data is infeasible: {0}")]
    Infeasible(String),
    #[error("shock formed at x = {x:.6} (characteristic map increment {increment:e})")]
    Shock { x: f64, increment: f64 },
    #[error("shape mismatch: {0}")]
    Shape(String),
}

pub type Result<T> = std::result::Result<T, Error>;
