//! Exact Gaussian ARMA likelihood via the Kalman filter on Harvey's
//! state-space form, with the innovation variance scaled out.

use nalgebra::{DMatrix, DVector};

/// `y_t = Z alpha_t`, `alpha_{t+1} = T alpha_t + R eps_t`, where `T` has the
/// AR coefficients in its first column and ones on the superdiagonal and
/// `R = (1, theta_1, ..., theta_{r-1})'`.
#[derive(Debug, Clone)]
pub(crate) struct StateSpace {
    r: usize,
    phi: Vec<f64>,
    rvec: Vec<f64>,
}

#[derive(Debug, Clone)]
pub(crate) struct FilterOutput {
    /// One-step prediction errors `v_t`.
    pub innovations: Vec<f64>,
    /// Prediction variances `F_t` in units of `sigma^2`.
    pub variances: Vec<f64>,
    /// One-step predictions `E[y_t | y_1..y_{t-1}]` of the centred series.
    pub predictions: Vec<f64>,
    /// `a_{n+1|n}`.
    pub next_state: Vec<f64>,
}

impl FilterOutput {
    pub fn sum_sq(&self) -> f64 {
        self.innovations
            .iter()
            .zip(&self.variances)
            .map(|(v, f)| v * v / f)
            .sum()
    }

    pub fn sum_log_f(&self) -> f64 {
        self.variances.iter().map(|f| f.ln()).sum()
    }

    /// Log-likelihood with `sigma^2` concentrated out.
    pub fn concentrated_loglik(&self) -> f64 {
        let n = self.innovations.len() as f64;
        let s2 = self.sum_sq() / n;
        -0.5 * n * ((2.0 * std::f64::consts::PI).ln() + s2.ln() + 1.0) - 0.5 * self.sum_log_f()
    }

    /// Log-likelihood at an explicit innovation variance.
    pub fn loglik(&self, sigma2: f64) -> f64 {
        let n = self.innovations.len() as f64;
        -0.5 * n * (2.0 * std::f64::consts::PI * sigma2).ln()
            - 0.5 * self.sum_log_f()
            - 0.5 * self.sum_sq() / sigma2
    }
}

impl StateSpace {
    pub fn new(ar: &[f64], ma: &[f64]) -> Self {
        let r = ar.len().max(ma.len() + 1);
        let mut phi = vec![0.0; r];
        phi[..ar.len()].copy_from_slice(ar);
        let mut rvec = vec![0.0; r];
        rvec[0] = 1.0;
        rvec[1..=ma.len()].copy_from_slice(ma);
        Self { r, phi, rvec }
    }

    /// Unconditional state covariance solving `P = T P T' + R R'`, by
    /// doubling. `None` if the recursion does not settle (non-stationary).
    fn initial_covariance(&self) -> Option<Vec<f64>> {
        let r = self.r;
        let rv = DVector::from_column_slice(&self.rvec);
        let mut p = &rv * rv.transpose();
        // Dense powers of T.
        let mut a = DMatrix::<f64>::zeros(r, r);
        for i in 0..r {
            a[(i, 0)] = self.phi[i];
            if i + 1 < r {
                a[(i, i + 1)] = 1.0;
            }
        }
        let mut ap = DMatrix::<f64>::zeros(r, r);
        let mut apa = DMatrix::<f64>::zeros(r, r);
        let mut aa = DMatrix::<f64>::zeros(r, r);
        for _ in 0..64 {
            a.mul_to(&p, &mut ap);
            ap.mul_to(&a.transpose(), &mut apa);
            let change = apa.amax();
            let scale = p.amax();
            p += &apa;
            if !scale.is_finite() || scale > 1e12 {
                return None;
            }
            if change <= 1e-15 * scale {
                // Row-major; P is symmetric.
                return Some(p.as_slice().to_vec());
            }
            a.mul_to(&a, &mut aa);
            std::mem::swap(&mut a, &mut aa);
        }
        None
    }

    /// Runs the filter over the centred observations.
    pub fn filter(&self, y: &[f64]) -> Option<FilterOutput> {
        let r = self.r;
        // P lives in an (r+1) x (r+1) buffer whose last row and column stay
        // zero, so the companion-form update needs no edge cases.
        let s = r + 1;
        let p0 = self.initial_covariance()?;
        let mut p = vec![0.0; s * s];
        for i in 0..r {
            p[i * s..i * s + r].copy_from_slice(&p0[i * r..(i + 1) * r]);
        }
        let mut next = vec![0.0; s * s];
        let mut phi = self.phi.clone();
        phi.push(0.0);
        let mut c = vec![0.0; r];
        let mut a = vec![0.0; r];
        let mut innovations = Vec::with_capacity(y.len());
        let mut variances = Vec::with_capacity(y.len());
        let mut predictions = Vec::with_capacity(y.len());
        let mut steady = false;
        let mut gain = vec![0.0; r];
        let mut f = p[0];

        for &obs in y {
            if !steady {
                f = p[0];
                if !(f > 0.0) || !f.is_finite() {
                    return None;
                }
                // c = T P e1, K = c / F
                for i in 0..r {
                    c[i] = phi[i] * p[0] + p[(i + 1) * s];
                    gain[i] = c[i] / f;
                }
            }
            let v = obs - a[0];
            predictions.push(a[0]);
            innovations.push(v);
            variances.push(f);

            let a0 = a[0];
            for i in 0..r {
                let below = if i + 1 < r { a[i + 1] } else { 0.0 };
                a[i] = phi[i] * a0 + below + gain[i] * v;
            }

            if !steady {
                // P' = T P T' + R R' - c c' / F
                let mut delta = 0.0f64;
                for i in 0..r {
                    let row_below = &p[(i + 1) * s..(i + 2) * s];
                    let (phi_i, ri, ci) = (phi[i], self.rvec[i], c[i]);
                    for j in i..r {
                        let v = phi_i * c[j] + phi[j] * row_below[0] + row_below[j + 1]
                            + ri * self.rvec[j]
                            - ci * c[j] / f;
                        delta = delta.max((v - p[i * s + j]).abs());
                        next[i * s + j] = v;
                        next[j * s + i] = v;
                    }
                }
                std::mem::swap(&mut p, &mut next);
                if delta < 1e-14 {
                    steady = true;
                    f = p[0];
                    for i in 0..r {
                        gain[i] = (phi[i] * p[0] + p[(i + 1) * s]) / f;
                    }
                }
            }
        }
        Some(FilterOutput {
            innovations,
            variances,
            predictions,
            next_state: a,
        })
    }

    /// Applies the transition to a state vector (no noise).
    pub fn propagate(&self, a: &[f64]) -> Vec<f64> {
        (0..self.r)
            .map(|i| self.phi[i] * a[0] + if i + 1 < self.r { a[i + 1] } else { 0.0 })
            .collect()
    }
}
