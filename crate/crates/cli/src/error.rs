use std::fmt;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
    Verification(String),
    NonConvergence(String),
    Shock(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Verification(_) => 2,
            CliError::NonConvergence(_) => 3,
            CliError::Shock(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
            CliError::NonConvergence(m) => write!(f, "solver did not converge: {m}"),
            CliError::Shock(m) => write!(f, "shock before horizon: {m}"),
        }
    }
}

impl From<limitshape::Error> for CliError {
    fn from(e: limitshape::Error) -> Self {
        match e {
            limitshape::Error::NonConvergence { .. } => CliError::NonConvergence(e.to_string()),
            limitshape::Error::Shock { .. } => CliError::Shock(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}
