use selfishness::closedform::ClosedFormError;
use selfishness::dynamics::DynamicsError;
use selfishness::families::FamilyError;
use selfishness::transforms::TransformError;

use crate::document::DocumentError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Document(#[from] DocumentError),
    #[error("{0}")]
    Params(String),
    #[error("{0}")]
    Transform(#[from] TransformError),
    #[error("{0}")]
    ClosedForm(ClosedFormError),
    #[error("{0}")]
    Family(FamilyError),
    #[error("game has {cells} profiles, above the cap of {cap}")]
    ExplosionGuard { cells: u128, cap: u128 },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ExplosionGuard { .. } => 3,
            _ => 2,
        }
    }
}

impl From<FamilyError> for CliError {
    fn from(e: FamilyError) -> Self {
        match e {
            FamilyError::ExplosionGuard { cells, cap } => CliError::ExplosionGuard { cells, cap },
            other => CliError::Family(other),
        }
    }
}

impl From<ClosedFormError> for CliError {
    fn from(e: ClosedFormError) -> Self {
        match e {
            ClosedFormError::Family(f) => f.into(),
            other => CliError::ClosedForm(other),
        }
    }
}

impl From<DynamicsError> for CliError {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::ExplosionGuard { cells, cap } => CliError::ExplosionGuard { cells, cap },
        }
    }
}
