//! Reference forecasters: the random walk and the sample-mean index.

use crate::error::{Error, Result};

fn check(series: &[f64], h: usize) -> Result<()> {
    if series.is_empty() {
        return Err(Error::TooShort { needed: 1, got: 0 });
    }
    if h == 0 {
        return Err(Error::InvalidArgument("forecast horizon must be at least 1".into()));
    }
    Ok(())
}

/// Every forecast equals the last observation.
pub fn naive_forecast(series: &[f64], h: usize) -> Result<Vec<f64>> {
    check(series, h)?;
    Ok(vec![series[series.len() - 1]; h])
}

/// Every forecast equals the sample mean of `series` (pass the training
/// segment only).
pub fn mean_forecast(series: &[f64], h: usize) -> Result<Vec<f64>> {
    check(series, h)?;
    Ok(vec![series.iter().sum::<f64>() / series.len() as f64; h])
}
