//! The structured pipeline report. Every block is either present or carries
//! the reason it was skipped, so renderers never guess.

use chrono::NaiveDate;
use fxcast_core::arima::{ArimaSpec, CorrelogramRow, Criterion, ForecastScheme, SelectionEntry};
use fxcast_core::descriptive::{DescriptiveStats, FrequencyReport};
use fxcast_core::evaluation::Leaderboard;
use fxcast_core::stat_tests::{
    ArchLmResult, BreakResult, LjungBoxRow, RunsResult, TestResult,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Block<T> {
    Present { value: T },
    Skipped { reason: String },
}

impl<T> Block<T> {
    pub fn skipped(reason: impl Into<String>) -> Self {
        Block::Skipped {
            reason: reason.into(),
        }
    }

    pub fn value(&self) -> Option<&T> {
        match self {
            Block::Present { value } => Some(value),
            Block::Skipped { .. } => None,
        }
    }

    pub fn is_present(&self) -> bool {
        matches!(self, Block::Present { .. })
    }
}

impl<T> From<T> for Block<T> {
    fn from(value: T) -> Self {
        Block::Present { value }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool_version: String,
    pub config_sha256: String,
    pub input: String,
    pub input_sha256: String,
    /// True when the input is byte-identical to the bundled snapshot.
    pub bundled_snapshot: bool,
    pub started_at: String,
    pub finished_at: String,
    pub n_prices: usize,
    pub n_returns: usize,
    pub train_len: usize,
    pub test_len: usize,
    pub first_date: NaiveDate,
    pub last_date: NaiveDate,
}

/// Percent returns over the full sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesBlock {
    pub dates: Vec<NaiveDate>,
    pub returns: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyBlock {
    pub counts: FrequencyReport,
    /// Percent of (zero, negative, positive) days.
    pub percentages: [f64; 3],
    /// `Corr(R_t^2, R_{t-1})`; negative values suggest a leverage effect.
    pub leverage_correlation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelledTest {
    pub label: String,
    pub result: TestResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitRootBlock {
    pub adf: Vec<LabelledTest>,
    pub pp: Vec<LabelledTest>,
    pub kpss: Vec<LabelledTest>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionPick {
    pub criterion: Criterion,
    pub value: f64,
    pub spec: ArimaSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionBlock {
    /// Criterion driving the estimated model.
    pub criterion: Criterion,
    pub p_range: (usize, usize),
    pub q_range: (usize, usize),
    pub d: usize,
    /// Best model under each criterion.
    pub picks: Vec<CriterionPick>,
    pub ranked: Vec<SelectionEntry>,
    pub failures: Vec<(ArimaSpec, String)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientRow {
    pub name: String,
    pub value: f64,
    /// `None` when the Hessian could not provide one.
    pub std_error: Option<f64>,
    pub t_stat: Option<f64>,
    pub p_value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateBlock {
    pub spec: ArimaSpec,
    pub coefficients: Vec<CoefficientRow>,
    pub sigma2: f64,
    pub log_likelihood: f64,
    pub r_squared: Option<f64>,
    pub adj_r_squared: Option<f64>,
    pub f_stat: Option<f64>,
    pub f_p_value: Option<f64>,
    pub aic: f64,
    pub bic: f64,
    pub hq: f64,
    pub nobs: usize,
    pub boundary: bool,
    pub residual_normality: TestResult,
    pub residual_arch: ArchLmResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LjungBoxBlock {
    pub model: ArimaSpec,
    pub fitted_params: usize,
    pub rows: Vec<LjungBoxRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothingRow {
    pub model: String,
    pub alpha: f64,
    pub beta: Option<f64>,
    pub ssr: f64,
    pub rmse: f64,
    pub n_errors: usize,
    pub alpha_identified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothingBlock {
    pub nobs: usize,
    pub rows: Vec<SmoothingRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedForecast {
    pub model_id: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForecastBlock {
    pub scheme: ForecastScheme,
    pub dates: Vec<NaiveDate>,
    pub actual: Vec<f64>,
    pub models: Vec<NamedForecast>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeaderboardBlock {
    pub leaderboard: Leaderboard,
    /// Mean rank across RMSE, MAE and SMAPE, best first.
    pub overall_ranking: Vec<(String, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub provenance: Provenance,
    pub series: Block<SeriesBlock>,
    pub descriptive: Block<DescriptiveStats>,
    pub frequency: Block<FrequencyBlock>,
    pub runs: Block<Vec<RunsResult>>,
    pub unit_root: Block<UnitRootBlock>,
    pub differenced_stationarity: Block<Vec<LabelledTest>>,
    pub breaks: Block<BreakResult>,
    pub correlogram: Block<Vec<CorrelogramRow>>,
    pub selection: Block<SelectionBlock>,
    pub estimate: Block<EstimateBlock>,
    pub ljung_box: Block<LjungBoxBlock>,
    pub smoothing: Block<SmoothingBlock>,
    pub forecasts: Block<ForecastBlock>,
    pub leaderboard: Block<LeaderboardBlock>,
}

/// Presence of a report block, as seen by coverage checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BlockStatus {
    Present,
    Skipped(String),
}

fn status<T>(b: &Block<T>) -> BlockStatus {
    match b {
        Block::Present { .. } => BlockStatus::Present,
        Block::Skipped { reason } => BlockStatus::Skipped(reason.clone()),
    }
}

impl PipelineReport {
    /// Numbered result tables in report order.
    pub const TABLES: [(u8, &'static str); 11] = [
        (1, "Descriptive Statistics"),
        (2, "Frequency Discrimination"),
        (3, "Runs Test Outcomes"),
        (4, "Unit Root/Stationary Tests"),
        (5, "Stationary Test"),
        (6, "Structural Breaks Test"),
        (7, "Model Selection"),
        (8, "Estimated ARIMA Model"),
        (9, "Ljung-Box Test"),
        (10, "Exponential Smoothing Estimation"),
        (11, "Forecasting Evaluation"),
    ];

    pub fn table_status(&self, table: u8) -> Option<BlockStatus> {
        Some(match table {
            1 => status(&self.descriptive),
            2 => status(&self.frequency),
            3 => status(&self.runs),
            4 => status(&self.unit_root),
            5 => status(&self.differenced_stationarity),
            6 => status(&self.breaks),
            7 => status(&self.selection),
            8 => status(&self.estimate),
            9 => status(&self.ljung_box),
            10 => status(&self.smoothing),
            11 => status(&self.leaderboard),
            _ => return None,
        })
    }

    /// Copy with run timestamps blanked, for determinism comparisons.
    pub fn without_timestamps(&self) -> Self {
        let mut r = self.clone();
        r.provenance.started_at.clear();
        r.provenance.finished_at.clear();
        r
    }
}

/// Maps non-finite values to `None` so structured output round-trips.
pub(crate) fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}
