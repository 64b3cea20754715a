//! CSV loading for dated exchange-rate levels.

use std::collections::HashSet;
use std::io::Read;
use std::path::Path;

use chrono::NaiveDate;
use fxcast_core::series::PriceSeries;
use sha2::{Digest, Sha256};

use crate::error::IngestError;

/// SHA-256 of the bundled `data/usdtry_2022.csv`.
pub const SNAPSHOT_SHA256: &str = include_str!("../../../data/usdtry_2022.csv.sha256");

/// Reads `date_column`/`value_column` from a headed CSV file. Rows may come
/// in any order; the result is sorted by date.
pub fn ingest_csv(
    path: &Path,
    date_column: &str,
    value_column: &str,
) -> Result<PriceSeries, IngestError> {
    let file = std::fs::File::open(path).map_err(|source| IngestError::Io {
        path: path.to_owned(),
        source,
    })?;
    ingest_reader(file, date_column, value_column)
}

pub fn ingest_reader<R: Read>(
    reader: R,
    date_column: &str,
    value_column: &str,
) -> Result<PriceSeries, IngestError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| IngestError::MissingColumn(name.to_owned()))
    };
    let (di, vi) = (find(date_column)?, find(value_column)?);

    let mut rows: Vec<(NaiveDate, f64)> = Vec::new();
    let mut seen = HashSet::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let raw_date = record.get(di).unwrap_or_default();
        let date = NaiveDate::parse_from_str(raw_date, "%Y-%m-%d").map_err(|_| {
            IngestError::UnparseableDate {
                line,
                value: raw_date.to_owned(),
            }
        })?;
        let raw_value = record.get(vi).unwrap_or_default();
        let value: f64 = raw_value
            .parse()
            .map_err(|_| IngestError::UnparseableRate {
                line,
                value: raw_value.to_owned(),
            })?;
        if !(value.is_finite() && value > 0.0) {
            return Err(IngestError::NonPositiveRate { date, value });
        }
        if !seen.insert(date) {
            return Err(IngestError::DuplicateDate(date));
        }
        rows.push((date, value));
    }
    if rows.len() < 2 {
        return Err(IngestError::TooFewRows(rows.len()));
    }
    rows.sort_by_key(|(d, _)| *d);
    let (dates, values) = rows.into_iter().unzip();
    // Dates are unique and sorted, rates positive: construction cannot fail.
    Ok(PriceSeries::new(dates, values).expect("validated rows"))
}

/// Hex SHA-256 of a file's bytes.
pub fn file_sha256(path: &Path) -> Result<String, IngestError> {
    let bytes = std::fs::read(path).map_err(|source| IngestError::Io {
        path: path.to_owned(),
        source,
    })?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str) -> Result<PriceSeries, IngestError> {
        ingest_reader(text.as_bytes(), "date", "rate")
    }

    #[test]
    fn happy_path_sorts_rows() {
        let p = load("date,rate\n2022-01-03,3\n2022-01-01,1\n2022-01-02,2\n").unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.values(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn typed_failures() {
        assert!(matches!(
            load("date,rate\n2022-01-01,1\n2022-01-01,2\n"),
            Err(IngestError::DuplicateDate(d)) if d.to_string() == "2022-01-01"
        ));
        assert!(matches!(
            load("day,rate\n2022-01-01,1\n"),
            Err(IngestError::MissingColumn(c)) if c == "date"
        ));
        assert!(matches!(
            load("date,rate\n01/02/2022,1\n2022-01-03,1\n"),
            Err(IngestError::UnparseableDate { line: 2, .. })
        ));
        assert!(matches!(
            load("date,rate\n2022-01-01,abc\n"),
            Err(IngestError::UnparseableRate { .. })
        ));
        assert!(matches!(
            load("date,rate\n2022-01-01,1\n2022-01-02,-1\n"),
            Err(IngestError::NonPositiveRate { .. })
        ));
        assert!(matches!(load("date,rate\n2022-01-01,1\n"), Err(IngestError::TooFewRows(1))));
    }

    #[test]
    fn custom_columns() {
        let p = ingest_reader("when,usd\n2022-01-01,1.5\n2022-01-02,1.6\n".as_bytes(), "when", "usd")
            .unwrap();
        assert_eq!(p.values(), &[1.5, 1.6]);
    }
}
