use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("user and aperture coincide at ({x}, {y}, {z}); free-space gain is undefined")]
    ZeroDistance { x: f64, y: f64, z: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("exhaustive search limited to K <= {max_tones} and M <= {max_users}, got K = {tones}, M = {users}")]
    EnumerationLimit {
        tones: usize,
        users: usize,
        max_tones: usize,
        max_users: usize,
    },

    #[error("invalid experiment config: {0}")]
    Config(String),

    #[error("failed to parse config {path}: {source}")]
    ConfigParse {
        path: PathBuf,
        #[source]
        source: toml::de::Error,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}
