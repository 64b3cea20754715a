//! Dated series containers and the level → return → difference transforms.

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exchange-rate levels indexed by strictly increasing calendar dates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriceSeries {
    dates: Vec<NaiveDate>,
    values: Vec<f64>,
}

impl PriceSeries {
    pub fn new(dates: Vec<NaiveDate>, values: Vec<f64>) -> Result<Self> {
        if dates.len() != values.len() {
            return Err(Error::LengthMismatch {
                left: dates.len(),
                right: values.len(),
            });
        }
        if values.len() < 2 {
            return Err(Error::TooShort {
                needed: 2,
                got: values.len(),
            });
        }
        if let Some(i) = dates.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::UnorderedDates(i + 1));
        }
        if let Some((index, &value)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v > 0.0))
        {
            return Err(Error::NonPositiveRate { index, value });
        }
        Ok(Self { dates, values })
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Percent returns (or any derived dated series, e.g. differenced returns).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReturnSeries {
    dates: Vec<NaiveDate>,
    values: Vec<f64>,
}

impl ReturnSeries {
    pub fn new(dates: Vec<NaiveDate>, values: Vec<f64>) -> Result<Self> {
        if dates.len() != values.len() {
            return Err(Error::LengthMismatch {
                left: dates.len(),
                right: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        if let Some(i) = dates.windows(2).position(|w| w[0] >= w[1]) {
            return Err(Error::UnorderedDates(i + 1));
        }
        Ok(Self { dates, values })
    }

    /// Builds a series from bare values on a synthetic daily calendar.
    /// Handy for simulations and tests where dates carry no meaning.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        let start = NaiveDate::from_ymd_opt(2000, 1, 1).expect("valid date");
        let dates = start.iter_days().take(values.len()).collect();
        Self::new(dates, values)
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn last(&self) -> Option<f64> {
        self.values.last().copied()
    }

    fn slice(&self, range: std::ops::Range<usize>) -> Self {
        Self {
            dates: self.dates[range.clone()].to_vec(),
            values: self.values[range].to_vec(),
        }
    }
}

/// Fraction of the sample assigned to the estimation segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    train_fraction: f64,
}

impl SplitSpec {
    pub fn new(train_fraction: f64) -> Result<Self> {
        if !(train_fraction > 0.0 && train_fraction < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "train fraction must lie in (0, 1), got {train_fraction}"
            )));
        }
        Ok(Self { train_fraction })
    }

    pub fn train_fraction(&self) -> f64 {
        self.train_fraction
    }

    /// Train length for a sample of `n` observations (floor rule).
    pub fn train_len(&self, n: usize) -> usize {
        (self.train_fraction * n as f64).floor() as usize
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainTestSplit {
    pub train: ReturnSeries,
    pub test: ReturnSeries,
}

/// `Return_t = (Rate_t - Rate_{t-1}) / Rate_{t-1} * 100`, dated at `t`.
pub fn compute_returns(prices: &PriceSeries) -> Result<ReturnSeries> {
    let v = prices.values();
    if v.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: v.len(),
        });
    }
    let values = v.windows(2).map(|w| (w[1] - w[0]) / w[0] * 100.0).collect();
    ReturnSeries::new(prices.dates()[1..].to_vec(), values)
}

/// Applies `(1 - L)` `d` times. The output is dated at the later observation
/// of each difference.
pub fn difference(series: &ReturnSeries, d: usize) -> Result<ReturnSeries> {
    if d >= series.len() {
        return Err(Error::TooShort {
            needed: d + 1,
            got: series.len(),
        });
    }
    let values = difference_values(series.values(), d);
    ReturnSeries::new(series.dates()[d..].to_vec(), values)
}

pub(crate) fn difference_values(values: &[f64], d: usize) -> Vec<f64> {
    let mut out = values.to_vec();
    for _ in 0..d {
        out = out.windows(2).map(|w| w[1] - w[0]).collect();
    }
    out
}

/// Inverse of [`difference`]: rebuilds the level series from its `d`-th
/// difference and the first `d` original observations.
pub fn integrate(differenced: &[f64], anchors: &[f64]) -> Vec<f64> {
    let d = anchors.len();
    if d == 0 {
        return differenced.to_vec();
    }
    // Heads of each intermediate difference order: heads[k] = first value of
    // the k-th difference of the original series.
    let heads: Vec<f64> = (0..d)
        .map(|k| difference_values(anchors, k)[0])
        .collect();
    let mut current = differenced.to_vec();
    for k in (0..d).rev() {
        let mut level = Vec::with_capacity(current.len() + 1);
        let mut acc = heads[k];
        level.push(acc);
        for &x in &current {
            acc += x;
            level.push(acc);
        }
        current = level;
    }
    current
}

/// Splits into contiguous train/test segments with `floor(fraction * N)`
/// training observations.
pub fn split(series: &ReturnSeries, spec: SplitSpec) -> Result<TrainTestSplit> {
    split_at(series, spec.train_len(series.len()))
}

/// Splits with an explicit training length.
pub fn split_at(series: &ReturnSeries, train_len: usize) -> Result<TrainTestSplit> {
    let n = series.len();
    if train_len == 0 || train_len >= n {
        return Err(Error::InvalidArgument(format!(
            "split of {n} observations at {train_len} leaves an empty segment"
        )));
    }
    Ok(TrainTestSplit {
        train: series.slice(0..train_len),
        test: series.slice(train_len..n),
    })
}
