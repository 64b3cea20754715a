//! Small dense OLS used by the auxiliary test regressions.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub(crate) struct Ols {
    pub params: Vec<f64>,
    pub std_errors: Vec<f64>,
    pub residuals: Vec<f64>,
    pub ssr: f64,
    pub nobs: usize,
}

impl Ols {
    /// Regresses `y` on the given regressor columns.
    pub fn fit(y: &[f64], columns: &[Vec<f64>]) -> Result<Self> {
        let nobs = y.len();
        let k = columns.len();
        if k == 0 || nobs <= k {
            return Err(Error::TooShort {
                needed: k + 1,
                got: nobs,
            });
        }
        let x = DMatrix::from_fn(nobs, k, |i, j| columns[j][i]);
        let yv = DVector::from_column_slice(y);

        let qr = x.clone().qr();
        let r = qr.r();
        let scale = (0..k).map(|i| r[(i, i)].abs()).fold(0.0, f64::max);
        if (0..k).any(|i| r[(i, i)].abs() <= 1e-10 * scale.max(f64::MIN_POSITIVE)) {
            return Err(Error::Collinear);
        }
        let qty = qr.q().transpose() * &yv;
        let beta = r
            .solve_upper_triangular(&qty)
            .ok_or(Error::Collinear)?;
        let r_inv = r
            .solve_upper_triangular(&DMatrix::identity(k, k))
            .ok_or(Error::Collinear)?;
        let xtx_inv = &r_inv * r_inv.transpose();

        let fitted = &x * &beta;
        let residuals: Vec<f64> = (0..nobs).map(|i| y[i] - fitted[i]).collect();
        let ssr: f64 = residuals.iter().map(|e| e * e).sum();
        let s2 = ssr / (nobs - k) as f64;
        let std_errors = (0..k).map(|j| (s2 * xtx_inv[(j, j)]).sqrt()).collect();

        Ok(Self {
            params: beta.iter().copied().collect(),
            std_errors,
            residuals,
            ssr,
            nobs,
        })
    }

    pub fn k(&self) -> usize {
        self.params.len()
    }

    pub fn t_value(&self, j: usize) -> f64 {
        self.params[j] / self.std_errors[j]
    }

    /// Gaussian log-likelihood at the OLS estimate.
    pub fn log_likelihood(&self) -> f64 {
        let n = self.nobs as f64;
        -0.5 * n * ((2.0 * std::f64::consts::PI).ln() + (self.ssr / n).ln() + 1.0)
    }

    pub fn aic(&self) -> f64 {
        -2.0 * self.log_likelihood() + 2.0 * self.k() as f64
    }

    /// Centered R² (the regression is assumed to carry an intercept).
    pub fn r_squared(&self, y: &[f64]) -> f64 {
        let mean = y.iter().sum::<f64>() / y.len() as f64;
        let sst: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
        1.0 - self.ssr / sst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exact_line() {
        let x: Vec<f64> = (0..10).map(f64::from).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 + 0.5 * v).collect();
        let fit = Ols::fit(&y, &[vec![1.0; 10], x]).unwrap();
        assert!((fit.params[0] - 2.0).abs() < 1e-12);
        assert!((fit.params[1] - 0.5).abs() < 1e-12);
        assert!(fit.ssr < 1e-20);
    }

    #[test]
    fn collinear_columns_rejected() {
        let x: Vec<f64> = (0..10).map(f64::from).collect();
        let y = x.clone();
        let twice: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
        assert!(matches!(
            Ols::fit(&y, &[x, twice]),
            Err(Error::Collinear)
        ));
    }

    #[test]
    fn standard_error_closed_form() {
        // Simple regression through the origin: se = sqrt(s2 / sum x^2).
        let x = vec![1.0, 2.0, 3.0, 4.0];
        let y = vec![1.1, 1.9, 3.2, 3.9];
        let fit = Ols::fit(&y, &[x.clone()]).unwrap();
        let sxx: f64 = x.iter().map(|v| v * v).sum();
        let sxy: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let b = sxy / sxx;
        let ssr: f64 = x.iter().zip(&y).map(|(a, c)| (c - b * a).powi(2)).sum();
        assert!((fit.params[0] - b).abs() < 1e-12);
        assert!((fit.std_errors[0] - (ssr / 3.0 / sxx).sqrt()).abs() < 1e-12);
    }
}
