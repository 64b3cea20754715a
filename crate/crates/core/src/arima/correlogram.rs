use serde::{Deserialize, Serialize};

use crate::autocorr::{durbin_levinson_pacf, sample_acf};
use crate::descriptive::{is_degenerate, Moments};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelogramRow {
    pub lag: usize,
    pub acf: f64,
    pub pacf: f64,
    /// Half-width of the approximate 95% band, `1.96 / sqrt(n)`.
    pub band: f64,
}

/// Sample ACF (1/n normalisation) and Durbin-Levinson PACF for lags
/// `1..=max_lag`.
pub fn correlogram(series: &[f64], max_lag: usize) -> Result<Vec<CorrelogramRow>> {
    let n = series.len();
    if max_lag == 0 || 2 * max_lag >= n {
        return Err(Error::InvalidArgument(format!(
            "max_lag must lie in 1..{} for {n} observations",
            n.div_ceil(2)
        )));
    }
    let m = Moments::of(series);
    if is_degenerate(m.m2, m.mean) {
        return Err(Error::Degenerate("zero variance"));
    }
    let acf = sample_acf(series, max_lag);
    let pacf = durbin_levinson_pacf(&acf);
    let band = 1.96 / (n as f64).sqrt();
    Ok((1..=max_lag)
        .map(|lag| CorrelogramRow {
            lag,
            acf: acf[lag],
            pacf: pacf[lag - 1],
            band,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pacf1_equals_acf1_and_bounds() {
        let x: Vec<f64> = (0..50).map(|i| ((i * 7) % 13) as f64 - (i % 3) as f64).collect();
        let rows = correlogram(&x, 10).unwrap();
        assert_eq!(rows[0].lag, 1);
        assert!((rows[0].acf - rows[0].pacf).abs() < 1e-14);
        assert!(rows.iter().all(|r| r.acf.abs() <= 1.0));
        assert!((rows[0].band - 1.96 / 50f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn preconditions() {
        assert!(correlogram(&[1.0, 2.0, 3.0, 4.0], 2).is_err());
        assert!(correlogram(&[1.0; 20], 3).is_err());
    }
}
