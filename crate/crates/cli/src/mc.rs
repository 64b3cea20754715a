//! Monte Carlo size, power and parameter-recovery suites.
//!
//! Every replication draws from its own generator seeded from
//! `(root seed, task, replication)`, so results do not depend on thread
//! scheduling.

use std::time::Instant;

use fxcast_core::arima::{self, ArimaSpec};
use fxcast_core::smoothing::fit_brown;
use fxcast_core::stat_tests::{
    adf_test, arch_lm, bai_perron, kpss_test, AdfLagRule, BaiPerronConfig, BandwidthRule,
    Deterministic, Level,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McCheck {
    pub name: String,
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub pass: bool,
    pub reps: usize,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub seed: u64,
    pub checks: Vec<McCheck>,
}

impl McReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// SplitMix64 finaliser.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng_for(seed: u64, task: u64, rep: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix(mix(seed ^ mix(task)) ^ rep))
}

fn normals(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(rng)).collect()
}

fn cumsum(x: &[f64]) -> Vec<f64> {
    x.iter()
        .scan(0.0, |s, v| {
            *s += v;
            Some(*s)
        })
        .collect()
}

/// Fraction of replications for which `hit` returns true. Failed
/// replications count as misses.
fn rate<F>(seed: u64, task: u64, reps: usize, hit: F) -> f64
where
    F: Fn(&mut ChaCha8Rng) -> bool + Sync,
{
    let hits: usize = (0..reps as u64)
        .into_par_iter()
        .map(|r| hit(&mut rng_for(seed, task, r)) as usize)
        .sum();
    hits as f64 / reps as f64
}

/// Mean of `stat` over replications, skipping failures; returns (mean, n ok).
fn mean_of<F>(seed: u64, task: u64, reps: usize, stat: F) -> (f64, usize)
where
    F: Fn(&mut ChaCha8Rng) -> Option<Vec<f64>> + Sync,
{
    let draws: Vec<Vec<f64>> = (0..reps as u64)
        .into_par_iter()
        .filter_map(|r| stat(&mut rng_for(seed, task, r)))
        .collect();
    let k = draws.first().map_or(0, Vec::len);
    let mean = if draws.is_empty() {
        f64::NAN
    } else {
        (0..k).map(|j| draws.iter().map(|d| d[j]).sum::<f64>()).sum::<f64>() / draws.len() as f64
    };
    (mean, draws.len())
}

fn check(name: &str, value: f64, lower: f64, upper: f64, reps: usize, start: Instant) -> McCheck {
    McCheck {
        name: name.into(),
        value,
        lower,
        upper,
        pass: value >= lower && value <= upper,
        reps,
        seconds: start.elapsed().as_secs_f64(),
    }
}

const LEVEL: Level = Level::FivePercent;

/// Empirical rejection rates under each test's null at the 5% level, and
/// the Bai-Perron zero-break selection rate on white noise.
pub fn size_suite(seed: u64, reps: usize, nobs: usize) -> Vec<McCheck> {
    let mut out = Vec::new();

    let t = Instant::now();
    let v = rate(seed, 1, reps, |rng| {
        let walk = cumsum(&normals(rng, nobs));
        adf_test(&walk, Deterministic::Constant, AdfLagRule::default(), LEVEL)
            .is_ok_and(|r| r.reject_null)
    });
    out.push(check("ADF size (random walk)", v, 0.03, 0.07, reps, t));

    let t = Instant::now();
    let v = rate(seed, 2, reps, |rng| {
        kpss_test(&normals(rng, nobs), Deterministic::Constant, BandwidthRule::NeweyWest, LEVEL)
            .is_ok_and(|r| r.reject_null)
    });
    out.push(check("KPSS size (white noise)", v, 0.03, 0.07, reps, t));

    let t = Instant::now();
    let v = rate(seed, 3, reps, |rng| {
        arch_lm(&normals(rng, nobs), 1, LEVEL).is_ok_and(|r| r.lm.reject_null)
    });
    out.push(check("ARCH-LM size (iid)", v, 0.03, 0.07, reps, t));

    let t = Instant::now();
    let v = rate(seed, 4, reps, |rng| {
        bai_perron(&normals(rng, nobs), &BaiPerronConfig::default())
            .is_ok_and(|r| r.selected_break_count == 0)
    });
    out.push(check("Bai-Perron zero breaks (white noise)", v, 0.93, 1.0, reps, t));
    out
}

/// Power of ADF and Bai-Perron, plus ARMA and SES parameter recovery.
pub fn power_suite(seed: u64, reps: usize, nobs: usize) -> Vec<McCheck> {
    let mut out = Vec::new();

    let t = Instant::now();
    let v = rate(seed, 11, reps, |rng| {
        adf_test(&normals(rng, nobs), Deterministic::Constant, AdfLagRule::default(), LEVEL)
            .is_ok_and(|r| r.reject_null)
    });
    out.push(check("ADF power (white noise)", v, 0.99, 1.0, reps, t));

    let t = Instant::now();
    let shift_at = nobs / 2;
    let v = rate(seed, 12, reps, |rng| {
        let mut x = normals(rng, nobs);
        x[shift_at..].iter_mut().for_each(|v| *v += 10.0);
        bai_perron(&x, &BaiPerronConfig::default()).is_ok_and(|r| {
            r.break_indices
                .iter()
                .any(|&b| (b as i64 - shift_at as i64).abs() <= 3)
        })
    });
    out.push(check("Bai-Perron locates +10 sd shift (+-3)", v, 0.95, 1.0, reps, t));

    let (phi, theta) = (0.5, 0.3);
    let arma_reps = 100;
    let t = Instant::now();
    let spec = ArimaSpec::new(1, 0, 1, true).expect("valid order");
    let draws: Vec<(f64, f64)> = (0..arma_reps as u64)
        .into_par_iter()
        .filter_map(|r| {
            let mut rng = rng_for(seed, 13, r);
            let burn = 200;
            let e = normals(&mut rng, 2000 + burn);
            let mut y = vec![0.0; e.len()];
            for i in 1..e.len() {
                y[i] = phi * y[i - 1] + e[i] + theta * e[i - 1];
            }
            let fit = arima::fit(&y[burn..], spec).ok()?;
            Some((fit.params.ar[0], fit.params.ma[0]))
        })
        .collect();
    let n = draws.len() as f64;
    let mean_phi = draws.iter().map(|d| d.0).sum::<f64>() / n;
    let mean_theta = draws.iter().map(|d| d.1).sum::<f64>() / n;
    let mut c = check("ARMA(1,1) mean phi (0.5)", mean_phi, phi - 0.05, phi + 0.05, draws.len(), t);
    out.push(c.clone());
    c.name = "ARMA(1,1) mean theta (0.3)".into();
    c.value = mean_theta;
    c.lower = theta - 0.05;
    c.upper = theta + 0.05;
    c.pass = (mean_theta - theta).abs() <= 0.05;
    out.push(c);

    // Local-level model, for which simple exponential smoothing with the
    // same alpha is the optimal one-step predictor.
    let alpha = 0.3;
    let t = Instant::now();
    let (mean_alpha, ok) = mean_of(seed, 14, reps.min(200), |rng| {
        let e = normals(rng, nobs);
        let mut level = 0.0;
        let y: Vec<f64> = e
            .iter()
            .map(|&eps| {
                let obs = level + eps;
                level += alpha * eps;
                obs
            })
            .collect();
        fit_brown(&y).ok().map(|f| vec![f.alpha])
    });
    out.push(check("SES mean alpha (0.3)", mean_alpha, alpha - 0.05, alpha + 0.05, ok, t));
    out
}

pub fn run_all(seed: u64, reps: usize, nobs: usize) -> McReport {
    let mut checks = size_suite(seed, reps, nobs);
    checks.extend(power_suite(seed, reps, nobs));
    McReport { seed, checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn sub_seeds_are_deterministic_and_distinct() {
        let a: u64 = rng_for(1, 2, 3).random();
        let b: u64 = rng_for(1, 2, 3).random();
        let c: u64 = rng_for(1, 2, 4).random();
        let d: u64 = rng_for(1, 3, 3).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn small_suite_is_reproducible() {
        let a = size_suite(9, 20, 120);
        let b = size_suite(9, 20, 120);
        let strip = |v: &[McCheck]| v.iter().map(|c| c.value).collect::<Vec<_>>();
        assert_eq!(strip(&a), strip(&b));
    }
}
