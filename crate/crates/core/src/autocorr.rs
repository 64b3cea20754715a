//! Sample autocorrelations and Durbin-Levinson partial autocorrelations.

/// Sample ACF for lags `0..=max_lag`: demeaned, autocovariances divided
/// by `n`. Returns all zeros beyond lag 0 for a constant series.
pub fn sample_acf(x: &[f64], max_lag: usize) -> Vec<f64> {
    let n = x.len();
    let mean = x.iter().sum::<f64>() / n as f64;
    let e: Vec<f64> = x.iter().map(|v| v - mean).collect();
    let c0: f64 = e.iter().map(|v| v * v).sum();
    (0..=max_lag)
        .map(|k| {
            if k >= n || c0 == 0.0 {
                return if k == 0 { 1.0 } else { 0.0 };
            }
            e[k..].iter().zip(&e[..n - k]).map(|(a, b)| a * b).sum::<f64>() / c0
        })
        .collect()
}

/// PACF at lags `1..=acf.len()-1` from autocorrelations via the
/// Durbin-Levinson recursion.
pub fn durbin_levinson_pacf(acf: &[f64]) -> Vec<f64> {
    let max_lag = acf.len().saturating_sub(1);
    let mut pacf = Vec::with_capacity(max_lag);
    let mut phi: Vec<f64> = Vec::new();
    let mut v = 1.0;
    for k in 1..=max_lag {
        let num = acf[k] - phi.iter().enumerate().map(|(j, p)| p * acf[k - 1 - j]).sum::<f64>();
        let a = if v > 0.0 { num / v } else { 0.0 };
        let prev = phi.clone();
        for j in 0..phi.len() {
            phi[j] = prev[j] - a * prev[prev.len() - 1 - j];
        }
        phi.push(a);
        v *= 1.0 - a * a;
        pacf.push(a);
    }
    pacf
}
