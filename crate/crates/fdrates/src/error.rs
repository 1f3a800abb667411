use fdrates_core::Error as CoreError;

use crate::config::ConfigError;

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("configuration: {0}")]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{0}")]
    Usage(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

impl AppError {
    /// 1 for input the modules reject, 2 when a computation fails.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Config(_) | AppError::Usage(_) | AppError::Io(_) => EXIT_VALIDATION,
            AppError::Core(e) => match e {
                CoreError::InvalidParameter { .. }
                | CoreError::Extinction { .. }
                | CoreError::CriticalExponent { .. }
                | CoreError::NotBracketed { .. }
                | CoreError::SandwichViolation { .. } => EXIT_VALIDATION,
                CoreError::NoConvergence { .. }
                | CoreError::NewtonDivergence { .. }
                | CoreError::PositivityLoss { .. }
                | CoreError::DegenerateWindow(_)
                | CoreError::SingularGrid(_)
                | CoreError::ZeroDenominator
                | CoreError::Inconsistent { .. }
                | CoreError::Dense(_) => EXIT_NUMERICAL,
            },
        }
    }
}

pub type AppResult<T> = Result<T, AppError>;
