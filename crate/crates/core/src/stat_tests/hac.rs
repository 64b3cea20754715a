//! Bartlett-kernel (Newey-West) long-run variance estimators.

use nalgebra::DMatrix;

/// Fixed Newey-West bandwidth `floor(4 (T/100)^{2/9})`.
pub fn newey_west_bandwidth(n: usize) -> usize {
    (4.0 * (n as f64 / 100.0).powf(2.0 / 9.0)).floor() as usize
}

/// Schwert upper bound on augmentation lags, `floor(12 (T/100)^{1/4})`.
pub fn schwert_max_lag(n: usize) -> usize {
    (12.0 * (n as f64 / 100.0).powf(0.25)).floor() as usize
}

/// Long-run variance `gamma_0 + 2 sum_j (1 - j/(L+1)) gamma_j`, with
/// autocovariances normalised by `n`.
pub fn bartlett_lrv(u: &[f64], lags: usize, demean: bool) -> f64 {
    let n = u.len();
    let mean = if demean {
        u.iter().sum::<f64>() / n as f64
    } else {
        0.0
    };
    let e: Vec<f64> = u.iter().map(|v| v - mean).collect();
    let autocov = |j: usize| -> f64 {
        e[j..].iter().zip(&e[..n - j]).map(|(a, b)| a * b).sum::<f64>() / n as f64
    };
    let mut lrv = autocov(0);
    for j in 1..=lags.min(n.saturating_sub(1)) {
        let w = 1.0 - j as f64 / (lags as f64 + 1.0);
        lrv += 2.0 * w * autocov(j);
    }
    lrv
}

/// HAC estimate of the long-run covariance of the score vectors `g_t`
/// (one `Vec` per column), normalised by `n`.
pub fn bartlett_hac(scores: &[Vec<f64>], lags: usize) -> DMatrix<f64> {
    let k = scores.len();
    let n = scores.first().map_or(0, Vec::len);
    let gamma = |j: usize| -> DMatrix<f64> {
        DMatrix::from_fn(k, k, |a, b| {
            (j..n).map(|t| scores[a][t] * scores[b][t - j]).sum::<f64>() / n as f64
        })
    };
    let mut omega = gamma(0);
    for j in 1..=lags.min(n.saturating_sub(1)) {
        let w = 1.0 - j as f64 / (lags as f64 + 1.0);
        let g = gamma(j);
        omega += (&g + g.transpose()) * w;
    }
    omega
}
