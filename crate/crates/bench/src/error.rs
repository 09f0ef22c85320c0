use std::path::PathBuf;

pub type Result<T, E = BenchError> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("config error: {0}")]
    Config(String),

    #[error("dataset error: {0}")]
    Dataset(String),

    #[error(transparent)]
    Core(#[from] ppnnn_core::Error),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl BenchError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 1 config, 2 dataset, 3 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) | Self::Json(_) => 1,
            Self::Dataset(_) => 2,
            Self::Core(e) => match e {
                ppnnn_core::Error::InvalidParameter(_) | ppnnn_core::Error::TooManyClusters { .. } => 1,
                ppnnn_core::Error::Io { .. }
                | ppnnn_core::Error::Csv(_)
                | ppnnn_core::Error::MalformedRow { .. }
                | ppnnn_core::Error::NonNumeric { .. }
                | ppnnn_core::Error::NonFinite { .. }
                | ppnnn_core::Error::TooFewPoints(_)
                | ppnnn_core::Error::RaggedRows { .. }
                | ppnnn_core::Error::UnknownLabelColumn(_)
                | ppnnn_core::Error::LabelLength { .. } => 2,
                _ => 3,
            },
            Self::Io { .. } => 3,
        }
    }
}
