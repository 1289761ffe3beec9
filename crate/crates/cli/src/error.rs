use std::process::ExitCode;

use connexion::formal::FormalError;
use connexion::grammar::ParseDiagnostic;
use connexion::numeric::NumericError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{origin}:{diagnostic}")]
    Parse { origin: String, diagnostic: ParseDiagnostic },
    #[error("numeric failure: {0}")]
    Numeric(#[from] NumericError),
    #[error("internal limit: {0}")]
    Limit(String),
    #[error("{0}")]
    Formal(FormalError),
}

impl From<FormalError> for CliError {
    fn from(e: FormalError) -> Self {
        match e {
            FormalError::Numeric(n) => CliError::Numeric(n),
            FormalError::CyclicSearchExhausted { .. } => CliError::Limit(e.to_string()),
            FormalError::NonMonomialLeading => CliError::Usage(format!(
                "{e}; operators with a non-monomial leading coefficient have other singularities near 0"
            )),
            other => CliError::Formal(other),
        }
    }
}

impl CliError {
    /// 1: usage or parse error, 2: numeric failure, 3: internal limit or
    /// failed internal consistency check.
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Usage(_) | CliError::Io { .. } | CliError::Parse { .. } => 1,
            CliError::Numeric(_) => 2,
            CliError::Limit(_) | CliError::Formal(_) => 3,
        })
    }
}
