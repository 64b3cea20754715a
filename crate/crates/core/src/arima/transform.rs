//! Maps unconstrained reals to stationary AR / invertible MA polynomials
//! through partial autocorrelations in (-1, 1).

/// Coefficients `phi` of `1 - sum phi_j z^j` from partial autocorrelations.
pub(crate) fn coefficients_from_pacf(pacf: &[f64]) -> Vec<f64> {
    let mut phi: Vec<f64> = Vec::with_capacity(pacf.len());
    for (k, &r) in pacf.iter().enumerate() {
        let prev = phi.clone();
        for j in 0..k {
            phi[j] = prev[j] - r * prev[k - 1 - j];
        }
        phi.push(r);
    }
    phi
}

/// Inverse of [`coefficients_from_pacf`]; `None` when the polynomial is not
/// stationary.
pub(crate) fn pacf_from_coefficients(phi: &[f64]) -> Option<Vec<f64>> {
    let p = phi.len();
    let mut cur = phi.to_vec();
    let mut pacf = vec![0.0; p];
    for k in (0..p).rev() {
        let r = cur[k];
        if !(r.abs() < 1.0) {
            return None;
        }
        pacf[k] = r;
        let denom = 1.0 - r * r;
        let prev: Vec<f64> = (0..k).map(|j| (cur[j] + r * cur[k - 1 - j]) / denom).collect();
        cur = prev;
    }
    Some(pacf)
}

/// Stationary AR coefficients from unconstrained values.
pub(crate) fn ar_from_unconstrained(u: &[f64]) -> Vec<f64> {
    let pacf: Vec<f64> = u.iter().map(|v| v.tanh()).collect();
    coefficients_from_pacf(&pacf)
}

/// Invertible MA coefficients (`1 + sum theta_j z^j`) from unconstrained values.
pub(crate) fn ma_from_unconstrained(u: &[f64]) -> Vec<f64> {
    ar_from_unconstrained(u).into_iter().map(|v| -v).collect()
}

pub(crate) fn unconstrained_from_ar(phi: &[f64]) -> Option<Vec<f64>> {
    pacf_from_coefficients(phi).map(|p| p.iter().map(|r| r.clamp(-0.999, 0.999).atanh()).collect())
}

/// True when every root of `1 - sum phi_j z^j` lies strictly outside the
/// unit circle.
pub fn is_stationary(phi: &[f64]) -> bool {
    pacf_from_coefficients(phi).is_some()
}
