use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("numerical failure: {0}")]
    Numerical(lrtrap::Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<lrtrap::Error> for CliError {
    fn from(e: lrtrap::Error) -> Self {
        use lrtrap::Error as E;
        match e {
            E::InvalidConfig(_)
            | E::NodeOutOfRange { .. }
            | E::InfiniteExponent
            | E::TrapsNotAtEnds(_)
            | E::InvalidGrid(_)
            | E::InvalidArgument(_) => CliError::Usage(e.to_string()),
            other => CliError::Numerical(other),
        }
    }
}
