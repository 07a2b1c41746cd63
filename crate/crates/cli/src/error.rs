use bcurve_core::Error;
use thiserror::Error;

/// Failure classes of the command line, each with its own exit code.
///
/// | code | class |
/// |------|-------|
/// | 0 | success |
/// | 1 | internal error |
/// | 2 | parse, lowering or configuration error |
/// | 3 | operators do not commute |
/// | 4 | operator orders are not coprime |
/// | 5 | a verification or tolerance check failed |
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    NonCommuting(String),
    #[error("{0}")]
    NonCoprime(String),
    #[error("{0}")]
    Tolerance(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Internal(_) => 1,
            CliError::Parse(_) | CliError::Config(_) => 2,
            CliError::NonCommuting(_) => 3,
            CliError::NonCoprime(_) => 4,
            CliError::Tolerance(_) => 5,
        }
    }
}

fn root(e: &Error) -> &Error {
    match e {
        Error::Stage { source, .. } => root(source),
        other => other,
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match root(&e) {
            Error::NonCommuting { .. } | Error::TDependent { .. } => CliError::NonCommuting(msg),
            Error::ValidityExhausted { .. } | Error::OffCurve { .. } | Error::RootFinding(_) => CliError::Tolerance(msg),
            Error::BadBasePoint(_)
            | Error::Invalid(_)
            | Error::ZeroOperator
            | Error::NotRepresentable(_)
            | Error::InsufficientBound { .. }
            | Error::WrongRoot
            | Error::NotInvertible
            | Error::TranscendentalConstant(_) => CliError::Config(msg),
            _ => CliError::Internal(msg),
        }
    }
}
