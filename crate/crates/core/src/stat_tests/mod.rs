//! Hypothesis-test battery: normality, randomness, unit roots, stationarity,
//! serial correlation, ARCH effects and mean-shift structural breaks.

mod breaks;
mod hac;
mod kpss;
mod normality;
mod portmanteau;
pub(crate) mod regression;
mod runs;
mod unit_root;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, FisherSnedecor, Normal};

pub use breaks::{
    bai_perron, global_partition, BaiPerronConfig, BreakResult, BreakTest, Partition,
};
pub use hac::{bartlett_hac, bartlett_lrv, newey_west_bandwidth, schwert_max_lag};
pub use kpss::kpss_test;
pub use normality::{jarque_bera, jarque_bera_from_moments};
pub use portmanteau::{arch_lm, ljung_box, ArchLmResult, LjungBoxRow};
pub use runs::{runs_test, RunsResult, ThresholdKind, TiePolicy};
pub use unit_root::{adf_test, mackinnon_critical_value, mackinnon_p_value, pp_test, AdfLagRule};

/// Deterministic terms in unit-root / stationarity regressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Deterministic {
    None,
    Constant,
    ConstantTrend,
}

impl Deterministic {
    pub fn label(&self) -> &'static str {
        match self {
            Deterministic::None => "none",
            Deterministic::Constant => "constant",
            Deterministic::ConstantTrend => "constant+trend",
        }
    }

    /// Columns (constant, then trend 1..=n) for a regression of length `n`.
    pub(crate) fn columns(&self, n: usize) -> Vec<Vec<f64>> {
        match self {
            Deterministic::None => vec![],
            Deterministic::Constant => vec![vec![1.0; n]],
            Deterministic::ConstantTrend => {
                vec![vec![1.0; n], (1..=n).map(|t| t as f64).collect()]
            }
        }
    }
}

/// Bandwidth choice for the Bartlett long-run variance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "rule", content = "lags")]
pub enum BandwidthRule {
    /// `floor(4 (T/100)^{2/9})`.
    NeweyWest,
    Fixed(usize),
}

impl BandwidthRule {
    pub fn lags(&self, n: usize) -> usize {
        match *self {
            BandwidthRule::NeweyWest => newey_west_bandwidth(n),
            BandwidthRule::Fixed(l) => l,
        }
    }
}

/// Significance level for tabulated critical values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Level {
    #[serde(rename = "0.01")]
    OnePercent,
    #[default]
    #[serde(rename = "0.05")]
    FivePercent,
    #[serde(rename = "0.10")]
    TenPercent,
}

impl Level {
    pub fn alpha(&self) -> f64 {
        match self {
            Level::OnePercent => 0.01,
            Level::FivePercent => 0.05,
            Level::TenPercent => 0.10,
        }
    }

    pub(crate) fn index(&self) -> usize {
        match self {
            Level::OnePercent => 0,
            Level::FivePercent => 1,
            Level::TenPercent => 2,
        }
    }
}

/// Settings a test was run with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestSpec {
    pub deterministic: Option<Deterministic>,
    pub lags: Option<usize>,
    pub bandwidth: Option<usize>,
    pub nobs: usize,
    pub level: Level,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub statistic: f64,
    pub critical_value: f64,
    pub p_value: Option<f64>,
    /// True when the p-value comes from a response surface or table
    /// interpolation rather than an exact distribution.
    pub p_value_approximate: bool,
    pub reject_null: bool,
    pub spec: TestSpec,
}

/// Upper tail `P(X > x)` of a chi-square variable with `dof` degrees of freedom.
pub fn chi2_sf(x: f64, dof: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    ChiSquared::new(dof).expect("positive dof").sf(x)
}

pub(crate) fn f_sf(x: f64, d1: f64, d2: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    FisherSnedecor::new(d1, d2).expect("positive dof").sf(x)
}

pub(crate) fn normal_cdf(x: f64) -> f64 {
    Normal::standard().cdf(x)
}

pub(crate) fn two_sided_normal_p(z: f64) -> f64 {
    (2.0 * Normal::standard().sf(z.abs())).clamp(0.0, 1.0)
}
