use std::path::PathBuf;

use chrono::NaiveDate;
use thiserror::Error;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("column `{0}` not found in header")]
    MissingColumn(String),
    #[error("line {line}: cannot parse date `{value}` (expected YYYY-MM-DD)")]
    UnparseableDate { line: u64, value: String },
    #[error("line {line}: cannot parse rate `{value}`")]
    UnparseableRate { line: u64, value: String },
    #[error("{date}: rate {value} is not strictly positive")]
    NonPositiveRate { date: NaiveDate, value: f64 },
    #[error("duplicate date {0}")]
    DuplicateDate(NaiveDate),
    #[error("need at least 2 rows, found {0}")]
    TooFewRows(usize),
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("unknown {kind} `{token}`")]
    UnknownToken { kind: &'static str, token: String },
}

/// Pipeline stage, for error attribution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Split,
    Describe,
    Tests,
    Correlogram,
    Selection,
    Fit,
    Smoothing,
    Forecast,
    Evaluation,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Stage::Split => "split",
            Stage::Describe => "describe",
            Stage::Tests => "tests",
            Stage::Correlogram => "correlogram",
            Stage::Selection => "selection",
            Stage::Fit => "fit",
            Stage::Smoothing => "smoothing",
            Stage::Forecast => "forecast",
            Stage::Evaluation => "evaluation",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error("{stage} stage: {source}")]
    Stage {
        stage: Stage,
        #[source]
        source: fxcast_core::Error,
    },
    #[error("cannot write {path}: {source}")]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl PipelineError {
    pub fn stage(stage: Stage) -> impl FnOnce(fxcast_core::Error) -> Self {
        move |source| PipelineError::Stage { stage, source }
    }

    pub fn exit_code(&self) -> i32 {
        use fxcast_core::Error as E;
        match self {
            PipelineError::Config(_) | PipelineError::Output { .. } => EXIT_CONFIG,
            PipelineError::Ingest(_) => EXIT_DATA,
            PipelineError::Stage { source, .. } => match source {
                E::InvalidArgument(_) => EXIT_CONFIG,
                E::TooShort { .. }
                | E::UnorderedDates(_)
                | E::NonPositiveRate { .. }
                | E::NonFinite(_)
                | E::LengthMismatch { .. } => EXIT_DATA,
                E::Degenerate(_) | E::Collinear | E::NonConvergence { .. } | E::AllFitsFailed => {
                    EXIT_NUMERICAL
                }
            },
        }
    }
}
