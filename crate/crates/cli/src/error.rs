use std::path::PathBuf;

use grpf::expr::ParseError;
use grpf::geometry::GeometryError;
use grpf::refine::RefineError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("bad expression: {0}")]
    Expression(#[from] ParseError),
    #[error(transparent)]
    Run(#[from] RefineError),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("could not encode results: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io { path: path.into(), source }
    }

    /// 2 for anything the user got wrong on the command line, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::Expression(_) => 2,
            Self::Run(RefineError::InvalidConfig(_)) => 2,
            Self::Run(RefineError::Geometry(GeometryError::InvalidDomain(_) | GeometryError::InvalidResolution(_))) => 2,
            Self::Run(_) | Self::Io { .. } | Self::Json(_) => 1,
        }
    }
}
