//! Brown (simple) and Holt (linear trend) exponential smoothing with
//! grid-searched RMSE-optimal parameters.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SmoothingKind {
    Brown,
    Holt,
}

/// Which observations contribute to the RMSE denominator.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorConvention {
    /// Only genuine one-step errors: from `t = 2` (Brown) or `t = 3` (Holt).
    #[default]
    OneStep,
    /// Startup observations count as zero errors, so the divisor is the
    /// series length.
    IncludeStartup,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothingFit {
    pub kind: SmoothingKind,
    pub alpha: f64,
    pub beta: Option<f64>,
    pub fitted: Vec<f64>,
    /// Holt only.
    pub trend_state: Option<Vec<f64>>,
    pub ssr: f64,
    pub rmse: f64,
    /// Denominator used for `rmse`.
    pub n_errors: usize,
    /// False for a Holt fit whose optimal `beta` is zero: the trend never
    /// updates and `alpha` then mostly compensates for the frozen start-up
    /// slope.
    pub alpha_identified: bool,
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must lie in [0, 1], got {v}")))
    }
}

fn rmse_of(ssr: f64, n: usize, errors: usize, convention: ErrorConvention) -> (f64, usize) {
    let denom = match convention {
        ErrorConvention::OneStep => errors,
        ErrorConvention::IncludeStartup => n,
    };
    ((ssr / denom as f64).sqrt(), denom)
}

fn brown_ssr(y: &[f64], alpha: f64) -> f64 {
    let mut level = y[0];
    let mut ssr = 0.0;
    for &v in &y[1..] {
        let e = v - level;
        ssr += e * e;
        level = alpha * v + (1.0 - alpha) * level;
    }
    ssr
}

fn holt_ssr(y: &[f64], alpha: f64, beta: f64) -> f64 {
    let mut level = y[1];
    let mut trend = y[1] - y[0];
    let mut ssr = 0.0;
    for &v in &y[2..] {
        let forecast = level + trend;
        let e = v - forecast;
        ssr += e * e;
        let next = alpha * v + (1.0 - alpha) * forecast;
        trend = beta * (next - level) + (1.0 - beta) * trend;
        level = next;
    }
    ssr
}

/// `Ŷ_1 = Y_1`, `Ŷ_t = α Y_t + (1-α) Ŷ_{t-1}`; errors `Y_t - Ŷ_{t-1}`.
pub fn brown_filter(series: &[f64], alpha: f64) -> Result<SmoothingFit> {
    brown_filter_with(series, alpha, ErrorConvention::default())
}

pub fn brown_filter_with(
    series: &[f64],
    alpha: f64,
    convention: ErrorConvention,
) -> Result<SmoothingFit> {
    check_unit("alpha", alpha)?;
    let n = series.len();
    if n < 2 {
        return Err(Error::TooShort { needed: 2, got: n });
    }
    let mut fitted = Vec::with_capacity(n);
    fitted.push(series[0]);
    for &v in &series[1..] {
        let prev = *fitted.last().expect("non-empty");
        fitted.push(alpha * v + (1.0 - alpha) * prev);
    }
    let ssr = brown_ssr(series, alpha);
    let (rmse, n_errors) = rmse_of(ssr, n, n - 1, convention);
    Ok(SmoothingFit {
        kind: SmoothingKind::Brown,
        alpha,
        beta: None,
        fitted,
        trend_state: None,
        ssr,
        rmse,
        n_errors,
        alpha_identified: true,
    })
}

/// Holt's linear method started at `Ŷ_1 = Y_1` and `ΔŶ_1 = ΔŶ_2 = Y_2 - Y_1`
/// (hence `Ŷ_2 = Y_2`); errors `Y_t - (Ŷ_{t-1} + ΔŶ_{t-1})` from `t = 3`.
pub fn holt_filter(series: &[f64], alpha: f64, beta: f64) -> Result<SmoothingFit> {
    holt_filter_with(series, alpha, beta, ErrorConvention::default())
}

pub fn holt_filter_with(
    series: &[f64],
    alpha: f64,
    beta: f64,
    convention: ErrorConvention,
) -> Result<SmoothingFit> {
    check_unit("alpha", alpha)?;
    check_unit("beta", beta)?;
    let n = series.len();
    if n < 3 {
        return Err(Error::TooShort { needed: 3, got: n });
    }
    let slope = series[1] - series[0];
    let mut fitted = vec![series[0], series[1]];
    let mut trend = vec![slope, slope];
    for &v in &series[2..] {
        let level = fitted[fitted.len() - 1];
        let forecast = level + trend[trend.len() - 1];
        let next = alpha * v + (1.0 - alpha) * forecast;
        trend.push(beta * (next - level) + (1.0 - beta) * trend[trend.len() - 1]);
        fitted.push(next);
    }
    let ssr = holt_ssr(series, alpha, beta);
    let (rmse, n_errors) = rmse_of(ssr, n, n - 2, convention);
    Ok(SmoothingFit {
        kind: SmoothingKind::Holt,
        alpha,
        beta: Some(beta),
        fitted,
        trend_state: Some(trend),
        ssr,
        rmse,
        n_errors,
        alpha_identified: beta != 0.0,
    })
}

/// First index of the minimum; earlier entries win ties.
fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = i;
        }
    }
    best
}

fn grid(steps: usize) -> Vec<f64> {
    (0..=steps).map(|i| i as f64 / steps as f64).collect()
}

/// Parameter search settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SmoothingOptions {
    /// Brown grid spacing and Holt refinement spacing; Holt's coarse pass
    /// uses ten times this. `1 / grid_step` must be a multiple of 10.
    pub grid_step: f64,
    pub convention: ErrorConvention,
}

impl Default for SmoothingOptions {
    fn default() -> Self {
        Self {
            grid_step: 0.001,
            convention: ErrorConvention::OneStep,
        }
    }
}

impl SmoothingOptions {
    fn steps(&self) -> Result<usize> {
        let steps = (1.0 / self.grid_step).round();
        let ok = self.grid_step > 0.0
            && steps >= 10.0
            && ((1.0 / self.grid_step) - steps).abs() < 1e-6
            && steps as usize % 10 == 0;
        if ok {
            Ok(steps as usize)
        } else {
            Err(Error::InvalidArgument(format!(
                "grid step {} must divide 1 into a multiple of 10 cells",
                self.grid_step
            )))
        }
    }
}

fn check_fit_len(series: &[f64]) -> Result<()> {
    if series.len() < 3 {
        return Err(Error::TooShort {
            needed: 3,
            got: series.len(),
        });
    }
    Ok(())
}

/// RMSE-optimal Brown smoothing over an exhaustive `0.001` grid.
pub fn fit_brown(series: &[f64]) -> Result<SmoothingFit> {
    fit_brown_with(series, &SmoothingOptions::default())
}

pub fn fit_brown_with(series: &[f64], options: &SmoothingOptions) -> Result<SmoothingFit> {
    check_fit_len(series)?;
    let alphas = grid(options.steps()?);
    let ssr: Vec<f64> = alphas.par_iter().map(|&a| brown_ssr(series, a)).collect();
    brown_filter_with(series, alphas[argmin(&ssr)], options.convention)
}

/// RMSE-optimal Holt smoothing: `0.01` grid on `[0, 1]^2`, then a `0.001`
/// grid within one coarse step of the coarse optimum.
pub fn fit_holt(series: &[f64]) -> Result<SmoothingFit> {
    fit_holt_with(series, &SmoothingOptions::default())
}

pub fn fit_holt_with(series: &[f64], options: &SmoothingOptions) -> Result<SmoothingFit> {
    check_fit_len(series)?;
    let fine = options.steps()?;
    let coarse = fine / 10;
    // Candidates are ordered by alpha, then beta, so argmin ties resolve
    // to the smaller alpha, then the smaller beta.
    let search = |cells: Vec<(f64, f64)>| -> (f64, f64) {
        let ssr: Vec<f64> = cells
            .par_iter()
            .map(|&(a, b)| holt_ssr(series, a, b))
            .collect();
        cells[argmin(&ssr)]
    };
    let coarse_grid = grid(coarse);
    let (a0, b0) = search(
        coarse_grid
            .iter()
            .flat_map(|&a| coarse_grid.iter().map(move |&b| (a, b)))
            .collect(),
    );
    let around = |c: f64| -> Vec<f64> {
        let centre = (c * fine as f64).round() as i64;
        (centre - 10..=centre + 10)
            .filter(|k| (0..=fine as i64).contains(k))
            .map(|k| k as f64 / fine as f64)
            .collect()
    };
    let (fine_a, fine_b) = (around(a0), around(b0));
    let (alpha, beta) = search(
        fine_a
            .iter()
            .flat_map(|&a| fine_b.iter().map(move |&b| (a, b)))
            .collect(),
    );
    holt_filter_with(series, alpha, beta, options.convention)
}

/// Brown: flat at the last smoothed value. Holt: `Ŷ_T + h ΔŶ_T`.
pub fn smoothing_forecast(fit: &SmoothingFit, h: usize) -> Result<Vec<f64>> {
    if h == 0 {
        return Err(Error::InvalidArgument("forecast horizon must be at least 1".into()));
    }
    let level = *fit.fitted.last().ok_or(Error::TooShort { needed: 1, got: 0 })?;
    let slope = match (&fit.kind, &fit.trend_state) {
        (SmoothingKind::Holt, Some(t)) => *t.last().ok_or(Error::TooShort { needed: 1, got: 0 })?,
        _ => 0.0,
    };
    Ok((1..=h).map(|k| level + k as f64 * slope).collect())
}
