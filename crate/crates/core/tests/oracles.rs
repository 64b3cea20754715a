//! Simulation-based checks against closed forms and known behaviour.

use fxcast_core::arima::{self, correlogram, ArimaSpec, Criterion};
use fxcast_core::smoothing::fit_brown;
use fxcast_core::stat_tests::{
    arch_lm, bai_perron, pp_test, adf_test, AdfLagRule, BaiPerronConfig, BandwidthRule,
    Deterministic, Level,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn noise(n: usize, r: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n).map(|_| StandardNormal.sample(r)).collect()
}

fn arma11(n: usize, phi: f64, theta: f64, r: &mut ChaCha8Rng) -> Vec<f64> {
    let e = noise(n + 100, r);
    let mut y = vec![0.0; e.len()];
    for t in 1..e.len() {
        y[t] = phi * y[t - 1] + e[t] + theta * e[t - 1];
    }
    y.split_off(100)
}

#[test]
fn white_noise_acf_is_small() {
    let x = noise(10_000, &mut rng(1));
    let rows = correlogram(&x, 20).unwrap();
    assert!(rows.iter().all(|r| r.acf.abs() < 0.05));
}

#[test]
fn ma1_autocorrelation() {
    let x = arma11(10_000, 0.0, 0.5, &mut rng(2));
    let rows = correlogram(&x, 5).unwrap();
    assert!((rows[0].acf - 0.4).abs() < 0.02, "{}", rows[0].acf);
    assert!(rows[1].acf.abs() < 0.03);
}

#[test]
fn ar1_estimates_are_unbiased_on_average() {
    let spec = ArimaSpec::new(1, 0, 0, true).unwrap();
    let mut r = rng(3);
    let mut total = 0.0;
    for _ in 0..100 {
        let y = arma11(2000, 0.5, 0.0, &mut r);
        total += arima::fit(&y, spec).unwrap().params.ar[0];
    }
    assert!((total / 100.0 - 0.5).abs() < 0.05);
}

#[test]
fn bic_prefers_true_arma11() {
    let mut r = rng(4);
    let reps = 30;
    let mut hits = 0;
    for _ in 0..reps {
        let y = arma11(2000, 0.6, 0.4, &mut r);
        let sel = arima::select(&y, 0..=2, 0..=2, 0, true, Criterion::Bic).unwrap();
        let best = sel.best().spec;
        if (best.p, best.q) == (1, 1) {
            hits += 1;
        }
    }
    assert!(hits * 2 > reps, "{hits}/{reps}");
}

#[test]
fn ses_alpha_recovery() {
    // y_t = l_{t-1} + e_t, l_t = l_{t-1} + alpha e_t.
    let alpha = 0.3;
    let e = noise(2000, &mut rng(5));
    let mut level = 0.0;
    let y: Vec<f64> = e
        .iter()
        .map(|v| {
            let obs = level + v;
            level += alpha * v;
            obs
        })
        .collect();
    let fit = fit_brown(&y).unwrap();
    assert!((fit.alpha - alpha).abs() < 0.05, "{}", fit.alpha);
}

#[test]
fn adf_power_on_white_noise() {
    let mut r = rng(6);
    let rejections = (0..100)
        .filter(|_| {
            let x = noise(500, &mut r);
            adf_test(&x, Deterministic::Constant, AdfLagRule::default(), Level::FivePercent)
                .unwrap()
                .reject_null
        })
        .count();
    assert!(rejections >= 98);
}

#[test]
fn pp_and_adf_agree_on_iid() {
    let mut r = rng(7);
    for _ in 0..20 {
        let x = noise(1000, &mut r);
        let a = adf_test(&x, Deterministic::Constant, AdfLagRule::Fixed(0), Level::FivePercent).unwrap();
        let p = pp_test(&x, Deterministic::Constant, BandwidthRule::NeweyWest, Level::FivePercent).unwrap();
        assert!((a.statistic - p.statistic).abs() < 0.5);
    }
}

#[test]
fn arch_lm_power() {
    let mut r = rng(8);
    let reps = 100;
    let hits = (0..reps)
        .filter(|_| {
            let z = noise(1000, &mut r);
            let mut e = vec![0.0f64; z.len()];
            for t in 1..z.len() {
                e[t] = z[t] * (1.0 + 0.5 * e[t - 1] * e[t - 1]).sqrt();
            }
            arch_lm(&e, 1, Level::FivePercent).unwrap().lm.reject_null
        })
        .count();
    assert!(hits * 10 > reps * 9, "{hits}");
}

#[test]
fn bai_perron_finds_a_large_shift() {
    let n = 200;
    let mut x = noise(n, &mut rng(9));
    let at = (0.3 * n as f64) as usize;
    for v in &mut x[at..] {
        *v += 10.0;
    }
    let res = bai_perron(&x, &BaiPerronConfig::default()).unwrap();
    assert_eq!(res.selected_break_count, 1);
    assert!(res.break_indices[0].abs_diff(at) <= 3);
}
