use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, FisherSnedecor, StudentsT};

use super::kalman::StateSpace;
use super::transform::{
    ar_from_unconstrained, ma_from_unconstrained, pacf_from_coefficients, unconstrained_from_ar,
};
use super::{ArimaFit, ArimaParams, ArimaSpec, Coefficient};
use crate::autocorr::{durbin_levinson_pacf, sample_acf};
use crate::error::{Error, Result};
use crate::optim::{bfgs, nelder_mead};
use crate::series::difference_values;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub max_iter: usize,
    /// Relative log-likelihood improvement that ends the quasi-Newton stage.
    pub rel_tol: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            max_iter: 500,
            rel_tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InformationCriteria {
    pub aic: f64,
    pub bic: f64,
    pub hq: f64,
}

/// Per-observation AIC, BIC and Hannan-Quinn criteria.
pub fn information_criteria(log_likelihood: f64, n_params: usize, n_obs: usize) -> InformationCriteria {
    let t = n_obs as f64;
    let k = n_params as f64;
    let base = -2.0 * log_likelihood;
    InformationCriteria {
        aic: (base + 2.0 * k) / t,
        bic: (base + k * t.ln()) / t,
        hq: (base + 2.0 * k * t.ln().ln()) / t,
    }
}

/// Unconstrained parameter vector layout: [mean offset], AR, MA.
struct Layout {
    spec: ArimaSpec,
    centre: f64,
    scale: f64,
}

impl Layout {
    fn dim(&self) -> usize {
        self.spec.n_coefficients()
    }

    fn params(&self, x: &[f64]) -> ArimaParams {
        let c = usize::from(self.spec.include_constant);
        let mean = if c == 1 { self.centre + self.scale * x[0] } else { 0.0 };
        ArimaParams {
            spec: self.spec,
            mean,
            ar: ar_from_unconstrained(&x[c..c + self.spec.p]),
            ma: ma_from_unconstrained(&x[c + self.spec.p..]),
        }
    }
}

fn centred(w: &[f64], mean: f64) -> Vec<f64> {
    w.iter().map(|v| v - mean).collect()
}

fn concentrated_loglik(w: &[f64], params: &ArimaParams) -> f64 {
    StateSpace::new(&params.ar, &params.ma)
        .filter(&centred(w, params.mean))
        .map(|o| o.concentrated_loglik())
        .filter(|v| v.is_finite())
        .unwrap_or(f64::NEG_INFINITY)
}

/// Full log-likelihood in natural parameters `[mean], ar, ma, sigma2`.
fn natural_loglik(w: &[f64], spec: ArimaSpec, theta: &[f64]) -> f64 {
    let c = usize::from(spec.include_constant);
    let mean = if c == 1 { theta[0] } else { 0.0 };
    let ar = &theta[c..c + spec.p];
    let ma = &theta[c + spec.p..c + spec.p + spec.q];
    let sigma2 = theta[theta.len() - 1];
    if sigma2 <= 0.0 {
        return f64::NAN;
    }
    StateSpace::new(ar, ma)
        .filter(&centred(w, mean))
        .map(|o| o.loglik(sigma2))
        .unwrap_or(f64::NAN)
}

/// Central-difference Hessian.
fn hessian<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64]) -> Vec<Vec<f64>> {
    let n = x.len();
    let h: Vec<f64> = x.iter().map(|v| 1e-4 * v.abs().max(1e-2)).collect();
    let f0 = f(x);
    let mut out = vec![vec![0.0; n]; n];
    let mut xp = x.to_vec();
    for i in 0..n {
        xp[i] = x[i] + h[i];
        let up = f(&xp);
        xp[i] = x[i] - h[i];
        let down = f(&xp);
        xp[i] = x[i];
        out[i][i] = (up - 2.0 * f0 + down) / (h[i] * h[i]);
        for j in 0..i {
            let mut eval = |si: f64, sj: f64| {
                xp[i] = x[i] + si * h[i];
                xp[j] = x[j] + sj * h[j];
                let v = f(&xp);
                xp[i] = x[i];
                xp[j] = x[j];
                v
            };
            let v = (eval(1.0, 1.0) - eval(1.0, -1.0) - eval(-1.0, 1.0) + eval(-1.0, -1.0))
                / (4.0 * h[i] * h[j]);
            out[i][j] = v;
            out[j][i] = v;
        }
    }
    out
}

/// Covariance `(-H)^{-1}` when `-H` is positive definite.
fn covariance_from_hessian(h: Vec<Vec<f64>>) -> Option<nalgebra::DMatrix<f64>> {
    let n = h.len();
    let neg = nalgebra::DMatrix::from_fn(n, n, |i, j| -h[i][j]);
    if neg.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let chol = nalgebra::Cholesky::new(neg)?;
    Some(chol.inverse())
}

fn start_points(w: &[f64], spec: ArimaSpec) -> Vec<Vec<f64>> {
    let c = usize::from(spec.include_constant);
    let dim = spec.n_coefficients();
    let fill = |ar: f64, ma: f64| -> Vec<f64> {
        let mut x = vec![0.0; dim];
        x[c..c + spec.p].iter_mut().for_each(|v| *v = ar);
        x[c + spec.p..].iter_mut().for_each(|v| *v = ma);
        x
    };
    let mut starts = vec![fill(0.0, 0.0)];

    // Yule-Walker AR start with MA at zero.
    let mut yw = fill(0.0, 0.0);
    if spec.p > 0 && w.len() > spec.p + 1 {
        let pacf = durbin_levinson_pacf(&sample_acf(w, spec.p));
        let phi = super::transform::coefficients_from_pacf(&pacf);
        if let Some(u) = unconstrained_from_ar(&phi) {
            yw[c..c + spec.p].copy_from_slice(&u);
        }
    }
    starts.push(yw);
    starts.push(fill(0.5, 0.5));
    starts.push(fill(-0.5, -0.5));
    starts.push(fill(0.3, 1.5));
    starts
}

/// Fits with default optimizer settings.
pub fn fit(series: &[f64], spec: ArimaSpec) -> Result<ArimaFit> {
    fit_with(series, spec, &FitOptions::default())
}

/// Differences `series` `d` times and maximises the exact Gaussian likelihood
/// of the ARMA model over stationary/invertible parameters. Five deterministic
/// simplex starts are refined by BFGS from the best one.
pub fn fit_with(series: &[f64], spec: ArimaSpec, options: &FitOptions) -> Result<ArimaFit> {
    if series.len() <= spec.d {
        return Err(Error::TooShort {
            needed: spec.d + 1,
            got: series.len(),
        });
    }
    let w = difference_values(series, spec.d);
    let n = w.len();
    let k = spec.n_coefficients();
    if n <= k + 2 {
        return Err(Error::TooShort {
            needed: spec.d + k + 3,
            got: series.len(),
        });
    }
    let mean = w.iter().sum::<f64>() / n as f64;
    let sst: f64 = w.iter().map(|v| (v - mean).powi(2)).sum();
    if sst <= f64::EPSILON * f64::EPSILON * (1.0 + mean * mean) * n as f64 {
        return Err(Error::Degenerate("differenced series has zero variance"));
    }
    let layout = Layout {
        spec,
        centre: mean,
        scale: (sst / n as f64).sqrt(),
    };

    let objective = |x: &[f64]| -> f64 {
        if x.iter().any(|v| v.abs() > 20.0) {
            return f64::INFINITY;
        }
        -concentrated_loglik(&w, &layout.params(x)) / n as f64
    };

    let best = start_points(&w, spec)
        .iter()
        .map(|x0| nelder_mead(&objective, x0, 0.3, options.max_iter, 1e-10))
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .expect("at least one start");
    if !best.value.is_finite() {
        return Err(Error::NonConvergence { iterations: options.max_iter });
    }
    let refined = bfgs(&objective, &best.x, options.max_iter, options.rel_tol)?;
    let (x, iterations) = if refined.value <= best.value {
        (refined.x, best.iterations + refined.iterations)
    } else {
        (best.x, best.iterations)
    };
    debug_assert_eq!(x.len(), layout.dim());

    let params = layout.params(&x);
    let out = StateSpace::new(&params.ar, &params.ma)
        .filter(&centred(&w, params.mean))
        .ok_or(Error::Degenerate("filter failed at the optimum"))?;
    let sigma2 = out.sum_sq() / n as f64;
    let log_likelihood = out.concentrated_loglik();

    // Standard errors from the Hessian of the full likelihood.
    let mut theta: Vec<f64> = Vec::with_capacity(k + 1);
    if spec.include_constant {
        theta.push(params.mean);
    }
    theta.extend(&params.ar);
    theta.extend(&params.ma);
    theta.push(sigma2);
    let cov = covariance_from_hessian(hessian(&|t: &[f64]| natural_loglik(&w, spec, t), &theta));

    let near_edge = |pacf: Option<Vec<f64>>| pacf.is_none_or(|p| p.iter().any(|r| r.abs() > 0.99));
    let neg_ma: Vec<f64> = params.ma.iter().map(|v| -v).collect();
    let boundary = near_edge(pacf_from_coefficients(&params.ar))
        || near_edge(pacf_from_coefficients(&neg_ma))
        || cov.is_none();

    let dof = (n - k).max(1) as f64;
    let t_dist = StudentsT::new(0.0, 1.0, dof).expect("positive dof");
    let mut names: Vec<String> = Vec::with_capacity(k);
    if spec.include_constant {
        names.push("C".into());
    }
    names.extend((1..=spec.p).map(|i| format!("AR({i})")));
    names.extend((1..=spec.q).map(|j| format!("MA({j})")));
    let coefficients = names
        .into_iter()
        .enumerate()
        .map(|(i, name)| {
            let value = theta[i];
            let std_error = cov
                .as_ref()
                .map(|c| c[(i, i)])
                .filter(|v| *v > 0.0)
                .map_or(f64::NAN, f64::sqrt);
            let t_stat = value / std_error;
            let p_value = if t_stat.is_finite() {
                2.0 * t_dist.sf(t_stat.abs())
            } else {
                f64::NAN
            };
            Coefficient {
                name,
                value,
                std_error,
                t_stat,
                p_value,
            }
        })
        .collect();

    let residuals = out.innovations.clone();
    let ssr: f64 = residuals.iter().map(|e| e * e).sum();
    let r_squared = 1.0 - ssr / sst;
    let nf = n as f64;
    let adj_r_squared = 1.0 - (1.0 - r_squared) * (nf - 1.0) / (nf - k as f64);
    let df1 = if spec.include_constant { k - 1 } else { k };
    let (f_stat, f_p_value) = if df1 > 0 {
        let f = (r_squared / df1 as f64) / ((1.0 - r_squared) / (nf - k as f64));
        let p = FisherSnedecor::new(df1 as f64, nf - k as f64)
            .map(|d| if f > 0.0 { d.sf(f) } else { 1.0 })
            .unwrap_or(f64::NAN);
        (f, p)
    } else {
        (f64::NAN, f64::NAN)
    };
    let ic = information_criteria(log_likelihood, k, n);

    Ok(ArimaFit {
        spec,
        params,
        coefficients,
        sigma2,
        log_likelihood,
        aic: ic.aic,
        bic: ic.bic,
        hq: ic.hq,
        residuals,
        nobs: n,
        r_squared,
        adj_r_squared,
        f_stat,
        f_p_value,
        boundary,
        iterations,
    })
}

/// Exact Gaussian log-likelihood of `params` at innovation variance
/// `sigma2`, evaluated on the `d`-differenced `series`.
pub fn log_likelihood(series: &[f64], params: &ArimaParams, sigma2: f64) -> Result<f64> {
    if !(sigma2 > 0.0 && sigma2.is_finite()) {
        return Err(Error::InvalidArgument(format!("sigma2 must be positive, got {sigma2}")));
    }
    let d = params.spec.d;
    if series.len() <= d + 1 {
        return Err(Error::TooShort { needed: d + 2, got: series.len() });
    }
    let w = difference_values(series, d);
    StateSpace::new(&params.ar, &params.ma)
        .filter(&centred(&w, params.mean))
        .map(|o| o.loglik(sigma2))
        .ok_or_else(|| Error::InvalidArgument("AR polynomial is not stationary".into()))
}

/// Log-likelihood of given parameters on the `d`-differenced series, with
/// the innovation variance concentrated out.
#[cfg(test)]
fn loglik_at(series: &[f64], params: &ArimaParams) -> f64 {
    concentrated_loglik(&difference_values(series, params.spec.d), params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn gaussian(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    fn ar1(n: usize, phi: f64, c: f64, seed: u64) -> Vec<f64> {
        let e = gaussian(n + 200, seed);
        let mut y = vec![c / (1.0 - phi); e.len()];
        for t in 1..e.len() {
            y[t] = c + phi * y[t - 1] + e[t];
        }
        y[200..].to_vec()
    }

    #[test]
    fn criteria_formulas() {
        let z = information_criteria(0.0, 0, 50);
        assert_eq!((z.aic, z.bic, z.hq), (0.0, 0.0, 0.0));
        let ic = information_criteria(-100.0, 5, 177);
        assert!((ic.aic - (200.0 + 10.0) / 177.0).abs() < 1e-12);
        assert!((ic.bic - (200.0 + 5.0 * 177f64.ln()) / 177.0).abs() < 1e-12);
        assert!((ic.hq - (200.0 + 10.0 * 177f64.ln().ln()) / 177.0).abs() < 1e-12);
        // ln T > 2 => BIC penalty exceeds AIC's.
        assert!(ic.bic >= ic.aic);
    }

    #[test]
    fn white_noise_ar_coefficient_insignificant() {
        let y = gaussian(400, 3);
        let f = fit(&y, ArimaSpec::new(1, 0, 0, false).unwrap()).unwrap();
        let c = &f.coefficients[0];
        assert!(c.value.abs() < 2.5 * c.std_error, "{c:?}");
        assert!(!f.boundary);
        assert_eq!(f.residuals.len(), 400);
    }

    #[test]
    fn recovers_ar1_with_mean() {
        let y = ar1(2000, 0.5, 1.0, 11);
        let f = fit(&y, ArimaSpec::new(1, 0, 0, true).unwrap()).unwrap();
        assert!((f.params.ar[0] - 0.5).abs() < 0.05);
        assert!((f.params.mean - 2.0).abs() < 0.15);
        assert!((f.sigma2 - 1.0).abs() < 0.1);
        // AR(1) coefficient se ~ sqrt((1 - phi^2) / n).
        let se = f.coefficients[1].std_error;
        assert!((se - (0.75f64 / 2000.0).sqrt()).abs() < 0.005, "{se}");
    }

    #[test]
    fn optimum_beats_zero_start() {
        let y = ar1(300, -0.4, 0.0, 5);
        let spec = ArimaSpec::new(2, 1, 1, true).unwrap();
        let f = fit(&y, spec).unwrap();
        let w = difference_values(&y, 1);
        let mean = w.iter().sum::<f64>() / w.len() as f64;
        let zero = ArimaParams { spec, mean, ar: vec![0.0, 0.0], ma: vec![0.0] };
        assert!(f.log_likelihood >= loglik_at(&y, &zero));
        assert!(super::super::is_stationary(&f.params.ar));
    }

    #[test]
    fn too_short_or_degenerate() {
        let spec = ArimaSpec::new(2, 1, 2, true).unwrap();
        assert!(fit(&[1.0, 2.0, 3.0, 4.0, 5.0], spec).is_err());
        assert!(matches!(
            fit(&[1.0; 30], ArimaSpec::new(1, 0, 0, true).unwrap()),
            Err(Error::Degenerate(_))
        ));
    }
}
