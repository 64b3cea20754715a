//! Augmented Dickey-Fuller and Phillips-Perron unit-root tests with
//! MacKinnon response-surface critical values and p-values.

use serde::{Deserialize, Serialize};

use super::hac::{bartlett_lrv, schwert_max_lag};
use super::regression::Ols;
use super::{normal_cdf, BandwidthRule, Deterministic, Level, TestResult, TestSpec};
use crate::error::{Error, Result};

const MIN_OBS: usize = 20;

/// Finite-sample critical values `c0 + c1/T + c2/T^2 + c3/T^3` (MacKinnon
/// 2010, one variable), rows 1%, 5%, 10%.
const CRIT_NONE: [[f64; 4]; 3] = [
    [-2.56574, -2.2358, -3.627, 0.0],
    [-1.94100, -0.2686, -3.365, 31.223],
    [-1.61682, 0.2656, -2.714, 25.364],
];
const CRIT_CONST: [[f64; 4]; 3] = [
    [-3.43035, -6.5393, -16.786, -79.433],
    [-2.86154, -2.8903, -4.234, -40.040],
    [-2.56677, -1.5384, -2.809, 0.0],
];
const CRIT_TREND: [[f64; 4]; 3] = [
    [-3.95877, -9.0531, -28.428, -134.155],
    [-3.41049, -4.3904, -9.036, -45.374],
    [-3.12705, -2.5856, -3.925, -22.380],
];

/// Asymptotic p-value surfaces (MacKinnon 1994): `(tau_min, tau_star,
/// tau_max, small-p polynomial, large-p polynomial)`.
struct PSurface {
    min: f64,
    star: f64,
    max: f64,
    small: [f64; 3],
    large: [f64; 4],
}

const P_NONE: PSurface = PSurface {
    min: -19.04,
    star: -1.04,
    max: f64::INFINITY,
    small: [0.6344, 1.2378, 3.2496e-2],
    large: [0.4797, 9.3557e-1, -0.6999e-1, 3.3066e-2],
};
const P_CONST: PSurface = PSurface {
    min: -18.83,
    star: -1.61,
    max: 2.74,
    small: [2.1659, 1.4412, 3.8269e-2],
    large: [1.7339, 9.3202e-1, -1.2745e-1, -1.0368e-2],
};
const P_TREND: PSurface = PSurface {
    min: -16.18,
    star: -2.89,
    max: 0.7,
    small: [3.2512, 1.6047, 4.9588e-2],
    large: [2.5261, 6.1654e-1, -3.7956e-1, -6.0285e-2],
};

fn poly(coefs: &[f64], x: f64) -> f64 {
    coefs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Critical value of the Dickey-Fuller tau statistic for a regression with
/// `nobs` observations.
pub fn mackinnon_critical_value(det: Deterministic, level: Level, nobs: usize) -> f64 {
    let table = match det {
        Deterministic::None => &CRIT_NONE,
        Deterministic::Constant => &CRIT_CONST,
        Deterministic::ConstantTrend => &CRIT_TREND,
    };
    poly(&table[level.index()], 1.0 / nobs as f64)
}

/// Approximate asymptotic p-value of the tau statistic.
pub fn mackinnon_p_value(stat: f64, det: Deterministic) -> f64 {
    let s = match det {
        Deterministic::None => &P_NONE,
        Deterministic::Constant => &P_CONST,
        Deterministic::ConstantTrend => &P_TREND,
    };
    if stat > s.max {
        1.0
    } else if stat < s.min {
        0.0
    } else if stat <= s.star {
        normal_cdf(poly(&s.small, stat))
    } else {
        normal_cdf(poly(&s.large, stat))
    }
}

/// Augmentation lag choice for the ADF regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "rule", content = "lags")]
pub enum AdfLagRule {
    /// Minimise AIC over `0..=max` (Schwert bound when `None`) on a common
    /// sample, then re-estimate at the chosen lag on the full sample.
    Aic(Option<usize>),
    Fixed(usize),
}

impl Default for AdfLagRule {
    fn default() -> Self {
        AdfLagRule::Aic(None)
    }
}

/// Dependent variable and regressors of the ADF regression over the last
/// `nobs` differences. The lagged level is the first non-deterministic column.
fn adf_design(x: &[f64], det: Deterministic, lags: usize, nobs: usize) -> (Vec<f64>, Vec<Vec<f64>>, usize) {
    let diff: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let start = diff.len() - nobs;
    let y = diff[start..].to_vec();
    let mut cols = det.columns(nobs);
    let level_col = cols.len();
    cols.push(x[start..start + nobs].to_vec());
    for i in 1..=lags {
        cols.push(diff[start - i..start - i + nobs].to_vec());
    }
    (y, cols, level_col)
}

fn check_len(x: &[f64]) -> Result<()> {
    if x.len() < MIN_OBS {
        return Err(Error::TooShort {
            needed: MIN_OBS,
            got: x.len(),
        });
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("non-finite observation".into()));
    }
    Ok(())
}

pub fn adf_test(
    x: &[f64],
    det: Deterministic,
    rule: AdfLagRule,
    level: Level,
) -> Result<TestResult> {
    check_len(x)?;
    let n = x.len();
    let ntrend = det.columns(0).len();
    let cap = (n / 2).saturating_sub(ntrend + 1);

    let lags = match rule {
        AdfLagRule::Fixed(l) => {
            if n - 1 <= l || n - 1 - l <= l + ntrend + 2 {
                return Err(Error::TooShort {
                    needed: 2 * l + ntrend + 4,
                    got: n,
                });
            }
            l
        }
        AdfLagRule::Aic(max) => {
            let max_lag = max.unwrap_or_else(|| schwert_max_lag(n)).min(cap);
            let nobs = n - 1 - max_lag;
            let mut best: Option<(f64, usize)> = None;
            for lag in 0..=max_lag {
                let (y, cols, _) = adf_design(x, det, lag, nobs);
                let aic = Ols::fit(&y, &cols)?.aic();
                if best.is_none_or(|(b, _)| aic < b) {
                    best = Some((aic, lag));
                }
            }
            best.map(|(_, l)| l).unwrap_or(0)
        }
    };

    let nobs = n - 1 - lags;
    let (y, cols, level_col) = adf_design(x, det, lags, nobs);
    let fit = Ols::fit(&y, &cols)?;
    let statistic = fit.t_value(level_col);
    let critical_value = mackinnon_critical_value(det, level, nobs);
    Ok(TestResult {
        statistic,
        critical_value,
        p_value: Some(mackinnon_p_value(statistic, det)),
        p_value_approximate: true,
        reject_null: statistic < critical_value,
        spec: TestSpec {
            deterministic: Some(det),
            lags: Some(lags),
            bandwidth: None,
            nobs,
            level,
        },
    })
}

/// Phillips-Perron `Z_tau`: Dickey-Fuller regression without augmentation,
/// with a Bartlett long-run variance correction of the t-ratio.
pub fn pp_test(
    x: &[f64],
    det: Deterministic,
    bandwidth: BandwidthRule,
    level: Level,
) -> Result<TestResult> {
    check_len(x)?;
    let lags = bandwidth.lags(x.len());
    let y = &x[1..];
    let n = y.len();
    let mut cols = vec![x[..n].to_vec()];
    cols.extend(det.columns(n));
    let fit = Ols::fit(y, &cols)?;
    let k = fit.k() as f64;
    let nf = n as f64;

    let u = &fit.residuals;
    let uu: f64 = u.iter().map(|e| e * e).sum();
    let s2 = uu / (nf - k);
    let s = s2.sqrt();
    let gamma0 = uu / nf;
    let lam2 = bartlett_lrv(u, lags, false);
    let sigma = fit.std_errors[0];
    if !(sigma > 0.0) || !(lam2 > 0.0) {
        return Err(Error::Degenerate("zero residual variance in the Phillips-Perron regression"));
    }
    let lam = lam2.sqrt();
    let rho = fit.params[0];
    let statistic = (gamma0 / lam2).sqrt() * ((rho - 1.0) / sigma)
        - 0.5 * ((lam2 - gamma0) / lam) * (nf * sigma / s);
    let critical_value = mackinnon_critical_value(det, level, n);
    Ok(TestResult {
        statistic,
        critical_value,
        p_value: Some(mackinnon_p_value(statistic, det)),
        p_value_approximate: true,
        reject_null: statistic < critical_value,
        spec: TestSpec {
            deterministic: Some(det),
            lags: None,
            bandwidth: Some(lags),
            nobs: n,
            level,
        },
    })
}
