//! Summary statistics, sign/trend frequency tables and the leverage proxy.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::ReturnSeries;
use crate::stat_tests::jarque_bera_from_moments;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescriptiveStats {
    pub n: usize,
    pub mean: f64,
    pub median: f64,
    pub mode: f64,
    pub max: f64,
    pub min: f64,
    pub std_dev: f64,
    pub skewness: f64,
    /// Raw (non-excess) kurtosis.
    pub kurtosis: f64,
    pub jb_stat: f64,
    pub jb_prob: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyReport {
    pub count_zero: usize,
    pub count_negative: usize,
    pub count_positive: usize,
    pub max_consecutive_negative_days: usize,
    pub max_consecutive_positive_days: usize,
    pub max_days_increasing: usize,
    pub max_days_decreasing: usize,
}

impl FrequencyReport {
    pub fn total(&self) -> usize {
        self.count_zero + self.count_negative + self.count_positive
    }

    /// Percentages of (zero, negative, positive) days.
    pub fn percentages(&self) -> [f64; 3] {
        let n = self.total() as f64;
        [
            100.0 * self.count_zero as f64 / n,
            100.0 * self.count_negative as f64 / n,
            100.0 * self.count_positive as f64 / n,
        ]
    }
}

/// Central moments with the population (1/n) divisor.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Moments {
    pub mean: f64,
    pub m2: f64,
    pub m3: f64,
    pub m4: f64,
}

impl Moments {
    pub fn of(x: &[f64]) -> Self {
        let n = x.len() as f64;
        let mean = x.iter().sum::<f64>() / n;
        let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
        for &v in x {
            let d = v - mean;
            let d2 = d * d;
            m2 += d2;
            m3 += d2 * d;
            m4 += d2 * d2;
        }
        Self {
            mean,
            m2: m2 / n,
            m3: m3 / n,
            m4: m4 / n,
        }
    }

    pub fn skewness(&self) -> f64 {
        self.m3 / self.m2.powf(1.5)
    }

    pub fn kurtosis(&self) -> f64 {
        self.m4 / (self.m2 * self.m2)
    }
}

pub(crate) fn median(x: &[f64]) -> f64 {
    let mut s = x.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

/// Most frequent value after rounding to three decimals; ties go to the
/// value nearest zero (then the smaller one).
pub(crate) fn rounded_mode(x: &[f64]) -> f64 {
    let mut counts: HashMap<i64, usize> = HashMap::new();
    for &v in x {
        *counts.entry((v * 1000.0).round() as i64).or_default() += 1;
    }
    let best = counts
        .into_iter()
        .max_by(|(ka, ca), (kb, cb)| {
            ca.cmp(cb)
                .then_with(|| kb.abs().cmp(&ka.abs()))
                .then_with(|| kb.cmp(ka))
        })
        .map(|(k, _)| k)
        .unwrap_or(0);
    best as f64 / 1000.0
}

pub(crate) fn is_degenerate(m2: f64, mean: f64) -> bool {
    m2 <= f64::EPSILON * f64::EPSILON * (1.0 + mean * mean)
}

pub fn describe(series: &ReturnSeries) -> Result<DescriptiveStats> {
    describe_values(series.values())
}

pub fn describe_values(x: &[f64]) -> Result<DescriptiveStats> {
    let n = x.len();
    if n < 4 {
        return Err(Error::TooShort { needed: 4, got: n });
    }
    let m = Moments::of(x);
    if is_degenerate(m.m2, m.mean) {
        return Err(Error::Degenerate("zero variance"));
    }
    let skewness = m.skewness();
    let kurtosis = m.kurtosis();
    let (jb_stat, jb_prob) = jarque_bera_from_moments(n, skewness, kurtosis);
    Ok(DescriptiveStats {
        n,
        mean: m.mean,
        median: median(x),
        mode: rounded_mode(x),
        max: x.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        min: x.iter().copied().fold(f64::INFINITY, f64::min),
        std_dev: (m.m2 * n as f64 / (n - 1) as f64).sqrt(),
        skewness,
        kurtosis,
        jb_stat,
        jb_prob,
    })
}

fn longest_run<I: Iterator<Item = bool>>(flags: I) -> usize {
    let (mut best, mut cur) = (0, 0);
    for f in flags {
        cur = if f { cur + 1 } else { 0 };
        best = best.max(cur);
    }
    best
}

/// Sign counts and the longest sign / monotone streaks.
///
/// Monotone streaks count days, so a strictly increasing stretch of three
/// values scores 3 and a lone value scores 1. Ties end a streak.
pub fn frequency_discrimination(series: &ReturnSeries) -> Result<FrequencyReport> {
    let x = series.values();
    if x.is_empty() {
        return Err(Error::TooShort { needed: 1, got: 0 });
    }
    let count_zero = x.iter().filter(|&&v| v == 0.0).count();
    let count_negative = x.iter().filter(|&&v| v < 0.0).count();
    let count_positive = x.iter().filter(|&&v| v > 0.0).count();

    let max_consecutive_negative_days = longest_run(x.iter().map(|&v| v < 0.0));
    let max_consecutive_positive_days = longest_run(x.iter().map(|&v| v > 0.0));
    let max_days_increasing = 1 + longest_run(x.windows(2).map(|w| w[1] > w[0]));
    let max_days_decreasing = 1 + longest_run(x.windows(2).map(|w| w[1] < w[0]));

    Ok(FrequencyReport {
        count_zero,
        count_negative,
        count_positive,
        max_consecutive_negative_days,
        max_consecutive_positive_days,
        max_days_increasing,
        max_days_decreasing,
    })
}

pub(crate) fn pearson(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (&x, &y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if is_degenerate(saa / n, ma) || is_degenerate(sbb / n, mb) {
        return Err(Error::Degenerate("zero variance in correlation input"));
    }
    Ok((sab / (saa.sqrt() * sbb.sqrt())).clamp(-1.0, 1.0))
}

/// `Corr(R_t^2, R_{t-1})` over the overlapping range. Negative values point
/// to a leverage effect.
pub fn leverage_correlation(series: &ReturnSeries) -> Result<f64> {
    let x = series.values();
    if x.len() < 3 {
        return Err(Error::TooShort {
            needed: 3,
            got: x.len(),
        });
    }
    let squared: Vec<f64> = x[1..].iter().map(|v| v * v).collect();
    pearson(&squared, &x[..x.len() - 1])
}
