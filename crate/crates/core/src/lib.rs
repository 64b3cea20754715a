//! Univariate analytics for daily exchange-rate returns: descriptive
//! statistics, a diagnostic test battery, ARIMA and exponential smoothing
//! models, benchmark forecasters and out-of-sample accuracy metrics.

pub mod arima;
pub mod autocorr;
pub mod benchmarks;
pub mod descriptive;
pub mod error;
pub mod evaluation;
pub mod optim;
pub mod series;
pub mod smoothing;
pub mod stat_tests;

pub use error::{Error, Result};
