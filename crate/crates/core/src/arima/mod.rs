//! ARMA/ARIMA modelling: correlogram, exact Gaussian maximum likelihood,
//! information-criterion order selection and multi-step forecasting.

mod correlogram;
mod estimate;
mod forecast;
mod kalman;
mod select;
mod transform;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use correlogram::{correlogram, CorrelogramRow};
pub use estimate::{
    fit, fit_with, information_criteria, log_likelihood, FitOptions, InformationCriteria,
};
pub use forecast::{forecast, forecast_rolling, ForecastScheme};
pub use select::{select, Criterion, Selection, SelectionEntry};
pub use transform::is_stationary;

/// Model order `(p, d, q)` and whether a mean term is estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArimaSpec {
    pub p: usize,
    pub d: usize,
    pub q: usize,
    pub include_constant: bool,
}

impl ArimaSpec {
    pub fn new(p: usize, d: usize, q: usize, include_constant: bool) -> Result<Self> {
        if p + q == 0 && !include_constant {
            return Err(Error::InvalidArgument(
                "a model needs AR or MA terms or a constant".into(),
            ));
        }
        Ok(Self {
            p,
            d,
            q,
            include_constant,
        })
    }

    /// Mean-equation coefficients: constant + AR + MA (variance excluded).
    pub fn n_coefficients(&self) -> usize {
        usize::from(self.include_constant) + self.p + self.q
    }
}

impl fmt::Display for ArimaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ARIMA({},{},{})", self.p, self.d, self.q)
    }
}

/// Parameters sufficient to filter and forecast: the mean of the
/// `d`-differenced series and the ARMA polynomials
/// `(1 - sum phi_i L^i)(w_t - mu) = (1 + sum theta_j L^j) eps_t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArimaParams {
    pub spec: ArimaSpec,
    pub mean: f64,
    pub ar: Vec<f64>,
    pub ma: Vec<f64>,
}

impl ArimaParams {
    /// Intercept form `c = mu (1 - sum phi_i)`.
    pub fn intercept(&self) -> f64 {
        self.mean * (1.0 - self.ar.iter().sum::<f64>())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    pub name: String,
    pub value: f64,
    /// NaN when the numerical Hessian is not invertible at the optimum.
    pub std_error: f64,
    pub t_stat: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArimaFit {
    pub spec: ArimaSpec,
    pub params: ArimaParams,
    /// `C` (mean of the differenced series, when estimated), then AR, then MA.
    pub coefficients: Vec<Coefficient>,
    pub sigma2: f64,
    pub log_likelihood: f64,
    /// Per-observation information criteria.
    pub aic: f64,
    pub bic: f64,
    pub hq: f64,
    /// One-step prediction errors on the differenced scale.
    pub residuals: Vec<f64>,
    pub nobs: usize,
    pub r_squared: f64,
    pub adj_r_squared: f64,
    pub f_stat: f64,
    pub f_p_value: f64,
    /// A partial autocorrelation of either polynomial sits at |r| > 0.99, or
    /// the Hessian could not be inverted. Standard errors are then unreliable.
    pub boundary: bool,
    pub iterations: usize,
}
