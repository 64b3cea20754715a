//! Command-line pipeline around `fxcast-core`: CSV ingestion, configuration,
//! orchestration, report rendering, plot-data export and Monte Carlo
//! verification suites.

pub mod config;
pub mod error;
pub mod ingest;
pub mod mc;
pub mod pipeline;
pub mod plot;
pub mod render;
pub mod report;

pub use config::{Overrides, PipelineConfig};
pub use error::{ConfigError, IngestError, PipelineError, Stage};
pub use ingest::{ingest_csv, ingest_reader};
pub use pipeline::{analyse, run_pipeline, run_stages, StagePlan};
pub use plot::{emit_plot_data, PlotError};
pub use render::{parse_report, render_report, Format};
pub use report::{Block, BlockStatus, PipelineReport};
