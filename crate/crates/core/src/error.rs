use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv line {line}: {message}")]
    Csv { line: usize, message: String },

    #[error("no data columns: file has only the year column")]
    NoDataColumns,

    #[error("gap in years: {found} follows {previous}")]
    YearGap { previous: i32, found: i32 },

    #[error("duplicate year {0}")]
    DuplicateYear(i32),

    #[error("unknown series `{0}`")]
    UnknownSeries(String),

    #[error("invalid role mapping: {0}")]
    Roles(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("sample too short: need at least {needed} observations, have {available}")]
    SampleTooShort { needed: usize, available: usize },

    #[error("design matrix is rank deficient (reciprocal condition number {rcond:.3e})")]
    RankDeficient { rcond: f64 },

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("unknown WDI indicator `{indicator}`: {message}")]
    UnknownIndicator { indicator: String, message: String },

    #[error("WDI response: {0}")]
    Wdi(String),

    #[error("http: {0}")]
    Http(String),

    #[error("no recorded fixture at {0}")]
    FixtureMissing(PathBuf),
}

impl Error {
    /// Whether the error stems from bad input (files, config, arguments) rather
    /// than from a numerical failure during estimation.
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            Error::SampleTooShort { .. }
                | Error::RankDeficient { .. }
                | Error::Singular(_)
                | Error::DegenerateFit(_)
        )
    }
}
