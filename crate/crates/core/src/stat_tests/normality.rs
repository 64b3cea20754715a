use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::{Level, TestResult, TestSpec};
use crate::descriptive::{is_degenerate, Moments};
use crate::error::{Error, Result};

/// `(JB, p)` from sample size, skewness and raw kurtosis. With two degrees
/// of freedom the chi-square tail is `exp(-JB/2)`.
pub fn jarque_bera_from_moments(n: usize, skewness: f64, kurtosis: f64) -> (f64, f64) {
    let excess = kurtosis - 3.0;
    let stat = n as f64 / 6.0 * (skewness * skewness + excess * excess / 4.0);
    (stat, (-stat / 2.0).exp())
}

pub fn jarque_bera(x: &[f64], level: Level) -> Result<TestResult> {
    if x.len() < 4 {
        return Err(Error::TooShort {
            needed: 4,
            got: x.len(),
        });
    }
    let m = Moments::of(x);
    if is_degenerate(m.m2, m.mean) {
        return Err(Error::Degenerate("zero variance"));
    }
    let (statistic, p) = jarque_bera_from_moments(x.len(), m.skewness(), m.kurtosis());
    let critical_value = ChiSquared::new(2.0)
        .expect("dof")
        .inverse_cdf(1.0 - level.alpha());
    Ok(TestResult {
        statistic,
        critical_value,
        p_value: Some(p),
        p_value_approximate: false,
        reject_null: statistic > critical_value,
        spec: TestSpec {
            deterministic: None,
            lags: None,
            bandwidth: None,
            nobs: x.len(),
            level,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_moments_give_zero() {
        let (s, p) = jarque_bera_from_moments(500, 0.0, 3.0);
        assert_eq!(s, 0.0);
        assert_eq!(p, 1.0);
    }

    #[test]
    fn direct_formula_value() {
        // 179/6 * (0.321^2 + 12.036^2 / 4)
        let (s, p) = jarque_bera_from_moments(179, -0.321, 15.036);
        let oracle = 179.0 / 6.0 * (0.321f64.powi(2) + 12.036f64.powi(2) / 4.0);
        assert!((s - oracle).abs() < 1e-12);
        assert!((s - 1083.45).abs() < 0.5);
        assert!(p < 1e-200);
    }

    #[test]
    fn chi2_two_dof_tail_is_exponential() {
        let chi = ChiSquared::new(2.0).unwrap();
        for x in [0.1, 1.0, 5.0, 12.0] {
            assert!((chi.sf(x) - (-x / 2.0f64).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn symmetric_platykurtic_sample() {
        let x = [-2.0, -1.0, 0.0, 1.0, 2.0];
        let r = jarque_bera(&x, Level::FivePercent).unwrap();
        // m2 = 2, m4 = 6.8, K = 1.7, S = 0.
        let oracle = 5.0 / 6.0 * (1.3f64.powi(2) / 4.0);
        assert!((r.statistic - oracle).abs() < 1e-12);
        assert!(!r.reject_null);
        assert!((r.critical_value - 5.991464547107979).abs() < 1e-9);
    }

    #[test]
    fn degenerate_input() {
        assert!(jarque_bera(&[1.0; 10], Level::FivePercent).is_err());
    }
}
