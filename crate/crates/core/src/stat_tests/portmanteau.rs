use serde::{Deserialize, Serialize};

use super::regression::Ols;
use super::{chi2_sf, f_sf, Level, TestResult, TestSpec};
use crate::autocorr::sample_acf;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LjungBoxRow {
    pub lag: usize,
    pub q_stat: f64,
    pub p_value: f64,
}

/// Ljung-Box `Q(h) = n(n+2) sum_{k<=h} r_k^2 / (n-k)` at each requested lag,
/// with `h - fitted_params` chi-square degrees of freedom.
pub fn ljung_box(
    residuals: &[f64],
    lags: &[usize],
    fitted_params: usize,
) -> Result<Vec<LjungBoxRow>> {
    let n = residuals.len();
    let max_lag = lags.iter().copied().max().ok_or_else(|| {
        Error::InvalidArgument("no lags requested".into())
    })?;
    if let Some(&bad) = lags.iter().find(|&&h| h <= fitted_params) {
        return Err(Error::InvalidArgument(format!(
            "lag {bad} leaves no degrees of freedom after {fitted_params} fitted parameters"
        )));
    }
    if max_lag >= n {
        return Err(Error::TooShort {
            needed: max_lag + 1,
            got: n,
        });
    }
    let acf = sample_acf(residuals, max_lag);
    let nf = n as f64;
    let mut cumulative = Vec::with_capacity(max_lag + 1);
    let mut q = 0.0;
    cumulative.push(0.0);
    for k in 1..=max_lag {
        q += acf[k] * acf[k] / (nf - k as f64);
        cumulative.push(nf * (nf + 2.0) * q);
    }
    Ok(lags
        .iter()
        .map(|&lag| {
            let q_stat = cumulative[lag];
            LjungBoxRow {
                lag,
                q_stat,
                p_value: chi2_sf(q_stat, (lag - fitted_params) as f64),
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchLmResult {
    /// `n R^2` Lagrange-multiplier form with chi-square(lags) p-value.
    pub lm: TestResult,
    pub f_stat: f64,
    pub f_p_value: f64,
    pub f_df: (usize, usize),
}

/// Engle's ARCH-LM test: squared residuals regressed on a constant and their
/// own `lags` lags.
pub fn arch_lm(residuals: &[f64], lags: usize, level: Level) -> Result<ArchLmResult> {
    if lags == 0 {
        return Err(Error::InvalidArgument("ARCH-LM needs at least one lag".into()));
    }
    let n = residuals.len();
    if n <= lags + 2 {
        return Err(Error::TooShort {
            needed: lags + 3,
            got: n,
        });
    }
    let sq: Vec<f64> = residuals.iter().map(|e| e * e).collect();
    let nobs = n - lags;
    let y = &sq[lags..];
    let mut cols = vec![vec![1.0; nobs]];
    for i in 1..=lags {
        cols.push(sq[lags - i..n - i].to_vec());
    }
    let fit = Ols::fit(y, &cols)?;
    let mean = y.iter().sum::<f64>() / nobs as f64;
    let sst: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    if sst <= 0.0 {
        return Err(Error::Degenerate("squared residuals are constant"));
    }
    let r2 = fit.r_squared(y);
    let lm_stat = nobs as f64 * r2;
    let df_den = nobs - lags - 1;
    let f_stat = (r2 / lags as f64) / ((1.0 - r2) / df_den as f64);

    let critical_value = statrs::distribution::ChiSquared::new(lags as f64)
        .map(|c| statrs::distribution::ContinuousCDF::inverse_cdf(&c, 1.0 - level.alpha()))
        .expect("positive dof");
    let p = chi2_sf(lm_stat, lags as f64);
    Ok(ArchLmResult {
        lm: TestResult {
            statistic: lm_stat,
            critical_value,
            p_value: Some(p),
            p_value_approximate: false,
            reject_null: p < level.alpha(),
            spec: TestSpec {
                deterministic: None,
                lags: Some(lags),
                bandwidth: None,
                nobs,
                level,
            },
        },
        f_stat,
        f_p_value: f_sf(f_stat, lags as f64, df_den as f64),
        f_df: (lags, df_den),
    })
}
