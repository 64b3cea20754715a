//! Columnar data files for external plotting.

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::report::PipelineReport;

#[derive(Debug, Error)]
pub enum PlotError {
    #[error("report has no {0} block")]
    MissingBlock(&'static str),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn write_csv(path: &Path, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<(), PlotError> {
    let io = |source: std::io::Error| PlotError::Io { path: path.to_owned(), source };
    let mut w = csv::Writer::from_path(path).map_err(|e| io(e.into()))?;
    w.write_record(header).map_err(|e| io(e.into()))?;
    for row in rows {
        w.write_record(&row).map_err(|e| io(e.into()))?;
    }
    w.flush().map_err(io)
}

/// Writes `returns.csv` (date,value) and `correlogram.csv`
/// (lag,acf,pacf,band) into `dir`, creating it if needed.
pub fn emit_plot_data(report: &PipelineReport, dir: &Path) -> Result<Vec<PathBuf>, PlotError> {
    let series = report.series.value().ok_or(PlotError::MissingBlock("series"))?;
    let correlogram = report
        .correlogram
        .value()
        .ok_or(PlotError::MissingBlock("correlogram"))?;
    std::fs::create_dir_all(dir).map_err(|source| PlotError::Io { path: dir.to_owned(), source })?;

    let returns_path = dir.join("returns.csv");
    write_csv(
        &returns_path,
        &["date", "value"],
        series
            .dates
            .iter()
            .zip(&series.returns)
            .map(|(d, v)| vec![d.to_string(), v.to_string()]),
    )?;
    let acf_path = dir.join("correlogram.csv");
    write_csv(
        &acf_path,
        &["lag", "acf", "pacf", "band"],
        correlogram.iter().map(|r| {
            vec![r.lag.to_string(), r.acf.to_string(), r.pacf.to_string(), r.band.to_string()]
        }),
    )?;
    Ok(vec![returns_path, acf_path])
}
