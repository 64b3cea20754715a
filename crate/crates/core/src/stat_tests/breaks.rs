//! Bai-Perron sequential tests for multiple mean shifts.
//!
//! Break dates are global SSR minimisers found by dynamic programming over
//! partitions with a minimum segment length of `floor(trimming * T)`. The
//! `l + 1 | l` statistic splits each of the `l + 1` regimes at its own SSR
//! minimiser and takes the largest HAC Wald statistic across regimes.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::hac::{bartlett_hac, newey_west_bandwidth};
use crate::error::{Error, Result};

/// 5% critical values of sup-F(l+1 | l), one breaking regressor, 15% trimming.
const CRIT_Q1_TRIM15: [f64; 5] = [8.58, 10.13, 11.14, 11.83, 12.25];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaiPerronConfig {
    pub max_breaks: usize,
    pub trimming: f64,
    /// Overrides the embedded table; entry `l` is the critical value of the
    /// `l` vs `l+1` test. Required when `trimming != 0.15`.
    pub critical_values: Option<Vec<f64>>,
    /// HAC bandwidth; the Newey-West rule on each regime's length when `None`.
    pub hac_lags: Option<usize>,
}

impl Default for BaiPerronConfig {
    fn default() -> Self {
        Self {
            max_breaks: 5,
            trimming: 0.15,
            critical_values: None,
            hac_lags: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BreakTest {
    /// e.g. "0 vs 1".
    pub label: String,
    pub f_stat: f64,
    pub scaled_f_stat: f64,
    pub critical_value: f64,
    pub reject: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BreakResult {
    pub tests: Vec<BreakTest>,
    pub selected_break_count: usize,
    /// Index of the first observation of each new regime.
    pub break_indices: Vec<usize>,
}

/// Cumulative sums for O(1) segment SSR under a mean-only model.
struct SegmentCost {
    s1: Vec<f64>,
    s2: Vec<f64>,
}

impl SegmentCost {
    fn new(x: &[f64]) -> Self {
        let mut s1 = Vec::with_capacity(x.len() + 1);
        let mut s2 = Vec::with_capacity(x.len() + 1);
        s1.push(0.0);
        s2.push(0.0);
        for &v in x {
            s1.push(s1.last().unwrap() + v);
            s2.push(s2.last().unwrap() + v * v);
        }
        Self { s1, s2 }
    }

    /// SSR of `x[a..b]` around its own mean.
    fn ssr(&self, a: usize, b: usize) -> f64 {
        let n = (b - a) as f64;
        let s = self.s1[b] - self.s1[a];
        (self.s2[b] - self.s2[a] - s * s / n).max(0.0)
    }
}

/// An optimal partition: regime start indices (excluding 0) and total SSR.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    pub breaks: Vec<usize>,
    pub ssr: f64,
}

/// Globally SSR-minimising partition of `x` into `breaks + 1` mean regimes,
/// each at least `min_len` long.
pub fn global_partition(x: &[f64], breaks: usize, min_len: usize) -> Result<Partition> {
    let n = x.len();
    let min_len = min_len.max(1);
    if (breaks + 1) * min_len > n {
        return Err(Error::TooShort {
            needed: (breaks + 1) * min_len,
            got: n,
        });
    }
    let cost = SegmentCost::new(x);
    // best[m][j]: minimal SSR of x[..j] with m breaks; arg[m][j]: last start.
    let mut best = vec![vec![f64::INFINITY; n + 1]; breaks + 1];
    let mut arg = vec![vec![0usize; n + 1]; breaks + 1];
    for j in min_len..=n {
        best[0][j] = cost.ssr(0, j);
    }
    for m in 1..=breaks {
        for j in (m + 1) * min_len..=n {
            let mut b = f64::INFINITY;
            let mut a = 0;
            for i in m * min_len..=j - min_len {
                let c = best[m - 1][i] + cost.ssr(i, j);
                if c < b {
                    b = c;
                    a = i;
                }
            }
            best[m][j] = b;
            arg[m][j] = a;
        }
    }
    let mut cuts = Vec::with_capacity(breaks);
    let mut j = n;
    for m in (1..=breaks).rev() {
        let i = arg[m][j];
        cuts.push(i);
        j = i;
    }
    cuts.reverse();
    Ok(Partition {
        breaks: cuts,
        ssr: best[breaks][n],
    })
}

/// HAC Wald statistic for equal means on either side of `split` within `seg`.
fn split_wald(seg: &[f64], split: usize, lags: usize) -> f64 {
    let n = seg.len();
    let (left, right) = seg.split_at(split);
    let m1 = left.iter().sum::<f64>() / left.len() as f64;
    let m2 = right.iter().sum::<f64>() / right.len() as f64;
    let mut g1 = vec![0.0; n];
    let mut g2 = vec![0.0; n];
    for t in 0..n {
        if t < split {
            g1[t] = seg[t] - m1;
        } else {
            g2[t] = seg[t] - m2;
        }
    }
    let omega = bartlett_hac(&[g1, g2], lags);
    // V = n (Z'Z)^{-1} Omega (Z'Z)^{-1} with Z'Z = diag(n1, n2).
    let nf = n as f64;
    let inv = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        1.0 / split as f64,
        1.0 / (n - split) as f64,
    ]));
    let v = &inv * omega * &inv * nf;
    let var_diff = v[(0, 0)] + v[(1, 1)] - 2.0 * v[(0, 1)];
    if var_diff <= 0.0 {
        return f64::INFINITY;
    }
    let d = m2 - m1;
    d * d / var_diff
}

/// Best single split of `x[a..b]` by SSR, respecting `min_len` on both sides.
fn best_split(cost: &SegmentCost, a: usize, b: usize, min_len: usize) -> Option<usize> {
    if b - a < 2 * min_len {
        return None;
    }
    (a + min_len..=b - min_len)
        .map(|s| (s, cost.ssr(a, s) + cost.ssr(s, b)))
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .map(|(s, _)| s)
}

pub fn bai_perron(x: &[f64], config: &BaiPerronConfig) -> Result<BreakResult> {
    let n = x.len();
    if config.max_breaks == 0 {
        return Err(Error::InvalidArgument("max_breaks must be at least 1".into()));
    }
    if !(config.trimming > 0.0 && config.trimming < 0.5) {
        return Err(Error::InvalidArgument(format!(
            "trimming must lie in (0, 0.5), got {}",
            config.trimming
        )));
    }
    let min_len = (config.trimming * n as f64).floor() as usize;
    if min_len < 2 {
        return Err(Error::TooShort {
            needed: (2.0 / config.trimming).ceil() as usize,
            got: n,
        });
    }
    let crit: Vec<f64> = match &config.critical_values {
        Some(c) => c.clone(),
        None if (config.trimming - 0.15).abs() < 1e-12 => CRIT_Q1_TRIM15.to_vec(),
        None => {
            return Err(Error::InvalidArgument(
                "critical values are tabulated for 15% trimming only; supply them explicitly"
                    .into(),
            ))
        }
    };
    let max_breaks = config.max_breaks.min(crit.len()).min(n / min_len - 1);

    let cost = SegmentCost::new(x);
    let mut tests = Vec::new();
    let mut selected: Vec<usize> = Vec::new();
    for l in 0..max_breaks {
        let current = if l == 0 {
            Vec::new()
        } else {
            global_partition(x, l, min_len)?.breaks
        };
        let mut bounds = vec![0];
        bounds.extend(&current);
        bounds.push(n);
        let stat = bounds
            .windows(2)
            .filter_map(|w| {
                let s = best_split(&cost, w[0], w[1], min_len)?;
                let seg = &x[w[0]..w[1]];
                let lags = config.hac_lags.unwrap_or_else(|| newey_west_bandwidth(seg.len()));
                Some(split_wald(seg, s - w[0], lags))
            })
            .fold(f64::NEG_INFINITY, f64::max);
        if stat == f64::NEG_INFINITY {
            break;
        }
        // One breaking regressor: F = Wald / q and the scaled F = q * F.
        let q = 1.0;
        let f_stat = stat / q;
        let reject = f_stat > crit[l];
        tests.push(BreakTest {
            label: format!("{} vs {}", l, l + 1),
            f_stat,
            scaled_f_stat: q * f_stat,
            critical_value: crit[l],
            reject,
        });
        if !reject {
            break;
        }
        selected = global_partition(x, l + 1, min_len)?.breaks;
    }
    Ok(BreakResult {
        tests,
        selected_break_count: selected.len(),
        break_indices: selected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn noise(n: usize, seed: u64) -> Vec<f64> {
        let mut s = seed;
        (0..n)
            .map(|_| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
            })
            .collect()
    }

    fn brute_force(x: &[f64], breaks: usize, min_len: usize) -> f64 {
        let cost = SegmentCost::new(x);
        let n = x.len();
        let mut best = f64::INFINITY;
        match breaks {
            0 => best = cost.ssr(0, n),
            1 => {
                for a in min_len..=n - min_len {
                    best = best.min(cost.ssr(0, a) + cost.ssr(a, n));
                }
            }
            2 => {
                for a in min_len..=n {
                    for b in a + min_len..=n.saturating_sub(min_len) {
                        best = best.min(cost.ssr(0, a) + cost.ssr(a, b) + cost.ssr(b, n));
                    }
                }
            }
            _ => unreachable!(),
        }
        best
    }

    #[test]
    fn dynamic_programme_matches_enumeration() {
        for seed in 0..20 {
            let n = 12 + (seed as usize % 19);
            let mut x = noise(n, seed);
            x[n / 3..].iter_mut().for_each(|v| *v += 0.7);
            for h in 2..=3 {
                for m in 0..=2 {
                    if (m + 1) * h > n {
                        continue;
                    }
                    let dp = global_partition(&x, m, h).unwrap();
                    assert_eq!(dp.ssr, brute_force(&x, m, h), "seed {seed} h {h} m {m}");
                }
            }
        }
    }

    #[test]
    fn segment_cost_direct() {
        let x = [1.0, 2.0, 6.0];
        let c = SegmentCost::new(&x);
        assert!((c.ssr(0, 3) - 14.0).abs() < 1e-12);
        assert_eq!(c.ssr(1, 2), 0.0);
    }

    #[test]
    fn large_shift_is_located() {
        let n = 200;
        let mut x = noise(n, 99);
        let sd = (1.0f64 / 12.0).sqrt();
        for v in &mut x[60..] {
            *v += 10.0 * sd;
        }
        let r = bai_perron(&x, &BaiPerronConfig::default()).unwrap();
        assert_eq!(r.selected_break_count, 1);
        assert!((r.break_indices[0] as i64 - 60).abs() <= 3);
        assert_eq!(r.tests.len(), 2);
        assert!(r.tests[0].reject && !r.tests[1].reject);
        assert_eq!(r.tests[1].label, "1 vs 2");
    }

    #[test]
    fn config_validation() {
        let x = noise(50, 1);
        let bad = BaiPerronConfig { trimming: 0.2, ..Default::default() };
        assert!(bai_perron(&x, &bad).is_err());
        let ok = BaiPerronConfig {
            trimming: 0.2,
            critical_values: Some(vec![8.0]),
            ..Default::default()
        };
        assert!(bai_perron(&x, &ok).is_ok());
        let short = noise(10, 1);
        assert!(bai_perron(&short, &BaiPerronConfig::default()).is_err());
        let zero = BaiPerronConfig { max_breaks: 0, ..Default::default() };
        assert!(bai_perron(&x, &zero).is_err());
    }
}
