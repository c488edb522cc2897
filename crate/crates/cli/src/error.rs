use thiserror::Error;

/// Failure of a CLI command, carrying its process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or values, unknown names, unsatisfiable settings.
    #[error("config error: {0}")]
    Config(String),
    /// Unreadable or malformed input data.
    #[error("parse error: {0}")]
    Parse(String),
    /// Writing output failed.
    #[error("io error: {0}")]
    Io(String),
    /// The algorithm itself failed.
    #[error("run error: {0}")]
    Run(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Parse(_) => 3,
            CliError::Io(_) | CliError::Run(_) => 1,
        }
    }
}

impl From<cshape::Error> for CliError {
    fn from(e: cshape::Error) -> Self {
        use cshape::Error as E;
        match e {
            E::Config(_) | E::InvalidParameter(_) => CliError::Config(e.to_string()),
            E::Parse { .. } | E::Io { .. } | E::InvalidSeries(_) | E::DimensionMismatch { .. } => {
                CliError::Parse(e.to_string())
            }
            E::EmptyCluster | E::DegenerateWeights => CliError::Run(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub(crate) fn write_file(path: &std::path::Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub(crate) fn read_file(path: &std::path::Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}
