use serde::{Deserialize, Serialize};

use super::two_sided_normal_p;
use crate::descriptive::{median, rounded_mode};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdKind {
    Mean,
    Median,
    Mode,
}

/// Treatment of observations exactly equal to the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TiePolicy {
    /// Remove them before counting runs.
    #[default]
    Drop,
    /// Count them in the at-or-below group.
    Below,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunsResult {
    pub threshold_kind: ThresholdKind,
    pub threshold: f64,
    pub n_above: usize,
    pub n_below: usize,
    pub observed_runs: usize,
    pub expected_runs: f64,
    pub std_dev: f64,
    pub z_stat: f64,
    pub p_value: f64,
}

/// Wald-Wolfowitz runs test around the mean, median or rounded mode, with
/// the large-sample normal approximation and a two-sided p-value.
pub fn runs_test(x: &[f64], kind: ThresholdKind, ties: TiePolicy) -> Result<RunsResult> {
    if x.len() < 2 {
        return Err(Error::TooShort {
            needed: 2,
            got: x.len(),
        });
    }
    let threshold = match kind {
        ThresholdKind::Mean => x.iter().sum::<f64>() / x.len() as f64,
        ThresholdKind::Median => median(x),
        ThresholdKind::Mode => rounded_mode(x),
    };
    let signs: Vec<bool> = x
        .iter()
        .filter_map(|&v| match ties {
            TiePolicy::Drop if v == threshold => None,
            _ => Some(v > threshold),
        })
        .collect();
    let n_above = signs.iter().filter(|&&s| s).count();
    let n_below = signs.len() - n_above;
    if n_above == 0 || n_below == 0 {
        return Err(Error::Degenerate("all observations fall on one side of the threshold"));
    }
    let observed_runs = 1 + signs.windows(2).filter(|w| w[0] != w[1]).count();

    let n = signs.len() as f64;
    let (n1, n2) = (n_above as f64, n_below as f64);
    let prod = 2.0 * n1 * n2;
    let expected_runs = prod / n + 1.0;
    let variance = prod * (prod - n) / (n * n * (n - 1.0));
    let std_dev = variance.sqrt();
    if !(std_dev > 0.0) {
        return Err(Error::Degenerate("runs variance is zero"));
    }
    let z_stat = (observed_runs as f64 - expected_runs) / std_dev;
    Ok(RunsResult {
        threshold_kind: kind,
        threshold,
        n_above,
        n_below,
        observed_runs,
        expected_runs,
        std_dev,
        z_stat,
        p_value: two_sided_normal_p(z_stat),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alternating_series_has_n_runs() {
        let x: Vec<f64> = (0..20).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let r = runs_test(&x, ThresholdKind::Mean, TiePolicy::Drop).unwrap();
        assert_eq!(r.observed_runs, 20);
        assert!(r.z_stat > 0.0);
        // Maximal: every other arrangement of 10/10 has fewer runs.
        assert!((r.expected_runs - 11.0).abs() < 1e-12);
    }

    #[test]
    fn two_blocks_have_two_runs() {
        let x = [-1.0, -2.0, -1.5, 3.0, 2.0, 4.0];
        let r = runs_test(&x, ThresholdKind::Median, TiePolicy::Drop).unwrap();
        assert_eq!(r.observed_runs, 2);
        assert!(r.z_stat < 0.0);
    }

    #[test]
    fn moments_reproduce_published_arithmetic() {
        // n1 = 60, n2 = 119 (n = 179) gives E[R] = 80.776 and sd 5.942;
        // (63 - 80.776) / 5.942 = -2.9916.
        let mut x = vec![1.0; 60];
        x.extend(vec![-1.0; 119]);
        let r = runs_test(&x, ThresholdKind::Mean, TiePolicy::Drop).unwrap();
        assert!((r.expected_runs - 80.776).abs() < 1e-3);
        assert!((r.std_dev - 5.942).abs() < 5e-4);
        assert!(((63.0 - 80.776) / 5.942 - -2.9916f64).abs() < 1e-4);
    }

    #[test]
    fn z_antisymmetric_under_negation() {
        let x = [0.3, -1.2, 0.8, 0.9, -0.1, -0.4, 1.5, 0.2, -0.9, 0.05, 0.6, -0.3];
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        let a = runs_test(&x, ThresholdKind::Mean, TiePolicy::Drop).unwrap();
        let b = runs_test(&neg, ThresholdKind::Mean, TiePolicy::Drop).unwrap();
        assert!((a.z_stat - b.z_stat).abs() < 1e-12);
        assert_eq!(a.observed_runs, b.observed_runs);
    }

    #[test]
    fn tie_policies_for_mode_threshold() {
        let x = [0.0, 0.0, 0.0, 1.0, -1.0, 2.0, 0.0, -2.0, 1.0];
        let dropped = runs_test(&x, ThresholdKind::Mode, TiePolicy::Drop).unwrap();
        assert_eq!(dropped.n_above + dropped.n_below, 5);
        let below = runs_test(&x, ThresholdKind::Mode, TiePolicy::Below).unwrap();
        assert_eq!(below.n_above + below.n_below, 9);
        assert_eq!(below.n_above, 3);
    }

    #[test]
    fn one_sided_sample_is_an_error() {
        assert!(runs_test(&[1.0, 1.0, 1.0], ThresholdKind::Mean, TiePolicy::Drop).is_err());
    }
}
