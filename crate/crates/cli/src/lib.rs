//! Library side of the `entropic` command: configuration, experiment
//! drivers and CSV output. The binary is a thin clap front end.

pub mod config;
pub mod experiments;
pub mod output;

pub use config::{Experiment, FixSelection, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    /// A theory check found a violated inequality.
    #[error("property check failed:\n{0}")]
    Property(String),

    #[error(transparent)]
    Core(#[from] entropic_core::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 0 success, 1 property or numerical failure, 2 usage, 3 guard violation.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) if e.is_guard_violation() => 3,
            CliError::Property(_) | CliError::Core(_) | CliError::Io(_) => 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
        assert_eq!(CliError::Property("x".into()).exit_code(), 1);
        let guard = entropic_core::Error::MassDrift {
            drift: 1.0,
            step: Some(3),
        };
        assert_eq!(CliError::from(guard).exit_code(), 3);
        assert_eq!(
            CliError::from(entropic_core::Error::SingularMatrix).exit_code(),
            1
        );
    }
}
