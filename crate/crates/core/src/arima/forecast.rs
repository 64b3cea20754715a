use serde::{Deserialize, Serialize};

use super::kalman::StateSpace;
use super::ArimaFit;
use crate::error::{Error, Result};
use crate::series::difference_values;

/// How out-of-sample ARIMA forecasts are produced.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ForecastScheme {
    /// Multi-step forecasts from the end of the estimation sample.
    #[default]
    Static,
    /// One-step forecasts, each conditioned on all actuals before it
    /// (coefficients held fixed).
    Rolling,
}

/// `C(d, k)` with alternating sign: coefficients of `y_{t-k}` in
/// `y_t = w_t + sum_k c_k y_{t-k}`.
fn integration_weights(d: usize) -> Vec<f64> {
    let mut binom = vec![1.0f64; d + 1];
    for k in 1..=d {
        binom[k] = binom[k - 1] * (d - k + 1) as f64 / k as f64;
    }
    (1..=d)
        .map(|k| if k % 2 == 1 { binom[k] } else { -binom[k] })
        .collect()
}

fn check_history(fit: &ArimaFit, history: &[f64]) -> Result<()> {
    let needed = fit.spec.d + 1;
    if history.len() < needed {
        return Err(Error::TooShort {
            needed,
            got: history.len(),
        });
    }
    Ok(())
}

fn filtered(fit: &ArimaFit, series: &[f64]) -> Result<(StateSpace, super::kalman::FilterOutput)> {
    let p = &fit.params;
    let w: Vec<f64> = difference_values(series, fit.spec.d)
        .into_iter()
        .map(|v| v - p.mean)
        .collect();
    let ss = StateSpace::new(&p.ar, &p.ma);
    let out = ss
        .filter(&w)
        .ok_or(Error::Degenerate("model is not stationary"))?;
    Ok((ss, out))
}

/// Iterated conditional-expectation forecasts for `h` steps after the last
/// value of `history`, re-integrated to the level of `history`.
pub fn forecast(fit: &ArimaFit, history: &[f64], h: usize) -> Result<Vec<f64>> {
    if h == 0 {
        return Err(Error::InvalidArgument("forecast horizon must be at least 1".into()));
    }
    check_history(fit, history)?;
    let (ss, out) = filtered(fit, history)?;
    let mean = fit.params.mean;
    let mut state = out.next_state;
    let mut w_hat = Vec::with_capacity(h);
    for _ in 0..h {
        w_hat.push(mean + state[0]);
        state = ss.propagate(&state);
    }

    let weights = integration_weights(fit.spec.d);
    let mut levels = history.to_vec();
    for w in w_hat {
        let y = w + weights
            .iter()
            .enumerate()
            .map(|(k, c)| c * levels[levels.len() - 1 - k])
            .sum::<f64>();
        levels.push(y);
    }
    Ok(levels.split_off(history.len()))
}

/// One-step-ahead forecasts of each element of `actuals`, conditioning on
/// `history` and the actuals that precede it.
pub fn forecast_rolling(fit: &ArimaFit, history: &[f64], actuals: &[f64]) -> Result<Vec<f64>> {
    if actuals.is_empty() {
        return Err(Error::InvalidArgument("forecast horizon must be at least 1".into()));
    }
    check_history(fit, history)?;
    let full: Vec<f64> = history.iter().chain(actuals).copied().collect();
    let (_, out) = filtered(fit, &full)?;
    let d = fit.spec.d;
    let weights = integration_weights(d);
    let offset = history.len() - d;
    Ok((0..actuals.len())
        .map(|i| {
            let t = history.len() + i;
            let w = fit.params.mean + out.predictions[offset + i];
            w + weights
                .iter()
                .enumerate()
                .map(|(k, c)| c * full[t - 1 - k])
                .sum::<f64>()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arima::{ArimaParams, ArimaSpec};

    fn fixed(spec: ArimaSpec, mean: f64, ar: Vec<f64>, ma: Vec<f64>) -> ArimaFit {
        ArimaFit {
            spec,
            params: ArimaParams { spec, mean, ar, ma },
            coefficients: vec![],
            sigma2: 1.0,
            log_likelihood: 0.0,
            aic: 0.0,
            bic: 0.0,
            hq: 0.0,
            residuals: vec![],
            nobs: 0,
            r_squared: 0.0,
            adj_r_squared: 0.0,
            f_stat: 0.0,
            f_p_value: 0.0,
            boundary: false,
            iterations: 0,
        }
    }

    #[test]
    fn weights() {
        assert!(integration_weights(0).is_empty());
        assert_eq!(integration_weights(1), vec![1.0]);
        assert_eq!(integration_weights(2), vec![2.0, -1.0]);
        assert_eq!(integration_weights(3), vec![3.0, -3.0, 1.0]);
    }

    #[test]
    fn zero_model_is_naive() {
        let spec = ArimaSpec::new(1, 1, 1, false).unwrap();
        let fit = fixed(spec, 0.0, vec![0.0], vec![0.0]);
        let y = [0.3, -0.1, 0.7, 0.2];
        let f = forecast(&fit, &y, 5).unwrap();
        assert!(f.iter().all(|v| (v - 0.2).abs() < 1e-12));
        let r = forecast_rolling(&fit, &y, &[1.0, -1.0, 4.0]).unwrap();
        assert_eq!(r, vec![0.2, 1.0, -1.0]);
    }

    #[test]
    fn ar1_closed_form() {
        let (phi, mu) = (0.6, 0.5);
        let spec = ArimaSpec::new(1, 0, 0, true).unwrap();
        let fit = fixed(spec, mu, vec![phi], vec![]);
        let y = [0.1, 0.9, -0.4, 2.0];
        let f = forecast(&fit, &y, 3).unwrap();
        for (h, v) in f.iter().enumerate() {
            let expect = mu + phi.powi(h as i32 + 1) * (2.0 - mu);
            assert!((v - expect).abs() < 1e-12, "h={}", h + 1);
        }
        let long = forecast(&fit, &y, 200).unwrap();
        assert!(((long[199] - mu) / mu).abs() < 1e-6);

        let r = forecast_rolling(&fit, &y, &[1.0, 3.0]).unwrap();
        assert!((r[0] - (mu + phi * (2.0 - mu))).abs() < 1e-12);
        assert!((r[1] - (mu + phi * (1.0 - mu))).abs() < 1e-12);
    }

    #[test]
    fn drift_integrates_linearly() {
        let spec = ArimaSpec::new(0, 1, 0, true).unwrap();
        let fit = fixed(spec, 0.25, vec![], vec![]);
        let f = forecast(&fit, &[1.0, 2.0, 3.0], 3).unwrap();
        assert_eq!(f, vec![3.25, 3.5, 3.75]);
        assert!(forecast(&fit, &[1.0], 0).is_err());
    }
}
