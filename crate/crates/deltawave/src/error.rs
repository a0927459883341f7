use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{source_name}:{line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },
    #[error("invalid value for `{field}`: {reason}")]
    Validation { field: &'static str, reason: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("computation failed: {0}")]
    Compute(#[from] deltawave_core::Error),
}

impl CliError {
    /// 2 for anything the user can fix in the input, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use deltawave_core::Error as E;
        match self {
            CliError::Parse { .. } | CliError::Validation { .. } | CliError::Io { .. } => 2,
            CliError::Compute(E::InvalidParameter { .. } | E::GridTooNarrow { .. } | E::ZeroMomentum) => 2,
            CliError::Compute(_) => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}
