use super::hac::bartlett_lrv;
use super::regression::Ols;
use super::{BandwidthRule, Deterministic, Level, TestResult, TestSpec};
use crate::error::{Error, Result};

/// Asymptotic KPSS critical values at 10%, 5%, 2.5%, 1%.
const CRIT_LEVEL: [f64; 4] = [0.347, 0.463, 0.574, 0.739];
const CRIT_TREND: [f64; 4] = [0.119, 0.146, 0.176, 0.216];
const CRIT_P: [f64; 4] = [0.10, 0.05, 0.025, 0.01];

fn table(det: Deterministic) -> &'static [f64; 4] {
    match det {
        Deterministic::ConstantTrend => &CRIT_TREND,
        _ => &CRIT_LEVEL,
    }
}

/// Table-interpolated p-value, clamped to `[0.01, 0.10]`.
fn interpolated_p(stat: f64, crit: &[f64; 4]) -> f64 {
    if stat <= crit[0] {
        return CRIT_P[0];
    }
    if stat >= crit[3] {
        return CRIT_P[3];
    }
    let i = crit.windows(2).position(|w| stat < w[1]).unwrap_or(2);
    let f = (stat - crit[i]) / (crit[i + 1] - crit[i]);
    CRIT_P[i] + f * (CRIT_P[i + 1] - CRIT_P[i])
}

/// KPSS stationarity test: `sum S_t^2 / (n^2 s^2(L))` over partial sums of
/// the demeaned (or detrended) series. The null is stationarity.
pub fn kpss_test(
    x: &[f64],
    det: Deterministic,
    bandwidth: BandwidthRule,
    level: Level,
) -> Result<TestResult> {
    if det == Deterministic::None {
        return Err(Error::InvalidArgument(
            "KPSS needs a constant or constant+trend specification".into(),
        ));
    }
    let n = x.len();
    if n < 20 {
        return Err(Error::TooShort { needed: 20, got: n });
    }
    let m = crate::descriptive::Moments::of(x);
    if crate::descriptive::is_degenerate(m.m2, m.mean) {
        return Err(Error::Degenerate("zero variance"));
    }
    let resid = Ols::fit(x, &det.columns(n))?.residuals;
    let lags = bandwidth.lags(n);
    let lrv = bartlett_lrv(&resid, lags, false);
    if !(lrv > 0.0) {
        return Err(Error::Degenerate("zero long-run variance"));
    }
    let mut partial = 0.0;
    let mut sum_sq = 0.0;
    for e in &resid {
        partial += e;
        sum_sq += partial * partial;
    }
    let statistic = sum_sq / ((n * n) as f64 * lrv);

    let crit = table(det);
    let critical_value = match level {
        Level::TenPercent => crit[0],
        Level::FivePercent => crit[1],
        Level::OnePercent => crit[3],
    };
    Ok(TestResult {
        statistic,
        critical_value,
        p_value: Some(interpolated_p(statistic, crit)),
        p_value_approximate: true,
        reject_null: statistic > critical_value,
        spec: TestSpec {
            deterministic: Some(det),
            lags: None,
            bandwidth: Some(lags),
            nobs: n,
            level,
        },
    })
}
