//! Declarative pipeline configuration (TOML) with command-line overrides.

use std::path::{Path, PathBuf};

use fxcast_core::arima::{Criterion, ForecastScheme};
use fxcast_core::smoothing::ErrorConvention;
use fxcast_core::stat_tests::{Level, TiePolicy};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::ConfigError;
use crate::render::Format;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub input: PathBuf,
    pub date_column: String,
    pub rate_column: String,
    pub out_dir: PathBuf,
    pub formats: Vec<Format>,
    /// Root seed for the Monte Carlo suites.
    pub seed: u64,
    pub split: SplitConfig,
    pub arima: ArimaConfig,
    pub zoo: ZooConfig,
    pub smoothing: SmoothingConfig,
    pub bai_perron: BaiPerronSection,
    pub tests: TestsConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            input: PathBuf::from("data/usdtry_2022.csv"),
            date_column: "date".into(),
            rate_column: "rate".into(),
            out_dir: PathBuf::from("out"),
            formats: vec![Format::Text, Format::Json],
            seed: 20_221_213,
            split: SplitConfig::default(),
            arima: ArimaConfig::default(),
            zoo: ZooConfig::default(),
            smoothing: SmoothingConfig::default(),
            bai_perron: BaiPerronSection::default(),
            tests: TestsConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SplitConfig {
    pub train_fraction: f64,
    /// Explicit training length; overrides `train_fraction`.
    pub train_len: Option<usize>,
}

impl Default for SplitConfig {
    fn default() -> Self {
        Self {
            train_fraction: 0.85,
            train_len: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ArimaConfig {
    pub p_min: usize,
    pub p_max: usize,
    pub q_min: usize,
    pub q_max: usize,
    pub d: usize,
    pub include_constant: bool,
    pub criterion: Criterion,
    pub scheme: ForecastScheme,
    pub correlogram_lags: usize,
    pub ljung_box_lags: Vec<usize>,
    pub arch_lags: usize,
}

impl Default for ArimaConfig {
    fn default() -> Self {
        Self {
            p_min: 1,
            p_max: 7,
            q_min: 1,
            q_max: 7,
            d: 1,
            include_constant: true,
            criterion: Criterion::Bic,
            scheme: ForecastScheme::Static,
            correlogram_lags: 20,
            ljung_box_lags: (5..=10).collect(),
            arch_lags: 1,
        }
    }
}

/// Which forecasters enter the evaluation, in report order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ZooConfig {
    /// The criterion-selected ARIMA model.
    pub selected: bool,
    /// Additional `[p, d, q]` orders.
    pub arima: Vec<[usize; 3]>,
    /// Pure AR orders, fitted on `d`-differenced returns.
    pub ar: Vec<usize>,
    /// Pure MA orders, fitted on `d`-differenced returns.
    pub ma: Vec<usize>,
    pub random_walk: bool,
    pub mean_index: bool,
    pub brown: bool,
    pub holt: bool,
}

impl Default for ZooConfig {
    fn default() -> Self {
        Self {
            selected: true,
            arima: vec![[4, 1, 2], [6, 1, 2]],
            ar: vec![2, 4, 6],
            ma: vec![2],
            random_walk: true,
            mean_index: true,
            brown: true,
            holt: false,
        }
    }
}

impl ZooConfig {
    /// A zoo containing only the random-walk benchmark.
    pub fn naive_only() -> Self {
        Self {
            selected: false,
            arima: vec![],
            ar: vec![],
            ma: vec![],
            random_walk: true,
            mean_index: false,
            brown: false,
            holt: false,
        }
    }

    fn is_empty(&self) -> bool {
        !self.selected
            && self.arima.is_empty()
            && self.ar.is_empty()
            && self.ma.is_empty()
            && !self.random_walk
            && !self.mean_index
            && !self.brown
            && !self.holt
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SmoothingConfig {
    pub grid_step: f64,
    pub convention: ErrorConvention,
}

impl Default for SmoothingConfig {
    fn default() -> Self {
        Self {
            grid_step: 0.001,
            convention: ErrorConvention::OneStep,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BaiPerronSection {
    pub max_breaks: usize,
    pub trimming: f64,
    pub critical_values: Option<Vec<f64>>,
}

impl Default for BaiPerronSection {
    fn default() -> Self {
        Self {
            max_breaks: 5,
            trimming: 0.15,
            critical_values: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TestsConfig {
    pub level: Level,
    pub runs_ties: TiePolicy,
}

impl Default for TestsConfig {
    fn default() -> Self {
        Self {
            level: Level::FivePercent,
            runs_ties: TiePolicy::Drop,
        }
    }
}

/// Command-line overrides; `None` keeps the file (or default) value.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub input: Option<PathBuf>,
    pub criterion: Option<String>,
    pub scheme: Option<String>,
    pub formats: Option<Vec<String>>,
    pub out_dir: Option<PathBuf>,
    pub seed: Option<u64>,
}

pub fn parse_criterion(token: &str) -> Result<Criterion, ConfigError> {
    match token.to_ascii_lowercase().as_str() {
        "aic" => Ok(Criterion::Aic),
        "bic" | "sic" => Ok(Criterion::Bic),
        "hq" | "hqc" => Ok(Criterion::Hq),
        _ => Err(ConfigError::UnknownToken {
            kind: "criterion",
            token: token.to_owned(),
        }),
    }
}

pub fn parse_scheme(token: &str) -> Result<ForecastScheme, ConfigError> {
    match token.to_ascii_lowercase().as_str() {
        "static" => Ok(ForecastScheme::Static),
        "rolling" => Ok(ForecastScheme::Rolling),
        _ => Err(ConfigError::UnknownToken {
            kind: "forecast scheme",
            token: token.to_owned(),
        }),
    }
}

impl PipelineConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let config: Self = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    /// Loads `path`, resolving a relative `input` against the config's
    /// directory.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_owned(),
            source,
        })?;
        let mut config = Self::from_toml(&text)?;
        if config.input.is_relative() {
            if let Some(dir) = path.parent() {
                let candidate = dir.join(&config.input);
                if candidate.exists() {
                    config.input = candidate;
                }
            }
        }
        Ok(config)
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<(), ConfigError> {
        if let Some(p) = &o.input {
            self.input = p.clone();
        }
        if let Some(c) = &o.criterion {
            self.arima.criterion = parse_criterion(c)?;
        }
        if let Some(s) = &o.scheme {
            self.arima.scheme = parse_scheme(s)?;
        }
        if let Some(fs) = &o.formats {
            self.formats = fs.iter().map(|f| f.parse()).collect::<Result<_, _>>()?;
        }
        if let Some(d) = &o.out_dir {
            self.out_dir = d.clone();
        }
        if let Some(s) = o.seed {
            self.seed = s;
        }
        self.validate()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |msg: String| Err(ConfigError::Invalid(msg));
        let a = &self.arima;
        if !(self.split.train_fraction > 0.0 && self.split.train_fraction < 1.0) {
            return bad(format!(
                "split.train_fraction must lie in (0, 1), got {}",
                self.split.train_fraction
            ));
        }
        if self.split.train_len == Some(0) {
            return bad("split.train_len must be positive".into());
        }
        if a.p_min > a.p_max || a.q_min > a.q_max {
            return bad("arima bounds need p_min <= p_max and q_min <= q_max".into());
        }
        if a.p_max == 0 && a.q_max == 0 {
            return bad("arima grid must contain a non-trivial model".into());
        }
        if a.d > 2 {
            return bad(format!("arima.d must be at most 2, got {}", a.d));
        }
        if a.correlogram_lags == 0 {
            return bad("arima.correlogram_lags must be positive".into());
        }
        if a.ljung_box_lags.is_empty() || a.arch_lags == 0 {
            return bad("arima.ljung_box_lags and arima.arch_lags must be non-empty".into());
        }
        if self.zoo.is_empty() {
            return bad("zoo enables no models".into());
        }
        if self.zoo.ar.contains(&0) || self.zoo.ma.contains(&0) {
            return bad("zoo AR/MA orders must be positive".into());
        }
        let step = self.smoothing.grid_step;
        if !(step > 0.0 && step <= 0.1) {
            return bad(format!("smoothing.grid_step must lie in (0, 0.1], got {step}"));
        }
        let bp = &self.bai_perron;
        if bp.max_breaks == 0 || !(bp.trimming > 0.0 && bp.trimming < 0.5) {
            return bad("bai_perron needs max_breaks >= 1 and trimming in (0, 0.5)".into());
        }
        if self.formats.is_empty() {
            return bad("at least one output format is required".into());
        }
        Ok(())
    }

    /// Hex SHA-256 of the canonical JSON encoding; stable across runs.
    pub fn fingerprint(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serialises");
        hex::encode(Sha256::digest(&json))
    }
}
