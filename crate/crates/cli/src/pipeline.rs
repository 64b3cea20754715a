//! Orchestration: ingest → returns → split → diagnostics → correlogram →
//! selection → fits → forecasts → leaderboard.

use chrono::Utc;
use fxcast_core::arima::{
    self, correlogram, ArimaFit, ArimaSpec, Criterion, ForecastScheme, SelectionEntry,
};
use fxcast_core::benchmarks::{mean_forecast, naive_forecast};
use fxcast_core::descriptive::{describe_values, frequency_discrimination, leverage_correlation};
use fxcast_core::evaluation::evaluate;
use fxcast_core::series::{compute_returns, difference, split, split_at, PriceSeries, SplitSpec};
use fxcast_core::smoothing::{
    brown_filter, fit_brown_with, fit_holt_with, smoothing_forecast, SmoothingFit,
    SmoothingOptions,
};
use fxcast_core::stat_tests::{
    adf_test, arch_lm, bai_perron, jarque_bera, kpss_test, ljung_box, pp_test, runs_test,
    AdfLagRule, BaiPerronConfig, BandwidthRule, Deterministic, ThresholdKind,
};
use rayon::prelude::*;

use crate::config::PipelineConfig;
use crate::error::{PipelineError, Stage};
use crate::ingest::{file_sha256, ingest_csv, SNAPSHOT_SHA256};
use crate::report::*;

type Result<T> = std::result::Result<T, PipelineError>;

/// Which blocks a run computes. Dependencies are filled in by
/// [`StagePlan::resolved`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct StagePlan {
    pub describe: bool,
    pub tests: bool,
    pub correlogram: bool,
    pub selection: bool,
    pub estimate: bool,
    pub smoothing: bool,
    pub forecasts: bool,
    pub evaluation: bool,
}

impl StagePlan {
    pub fn ingest() -> Self {
        Self::default()
    }

    pub fn describe() -> Self {
        Self { describe: true, ..Self::default() }
    }

    pub fn tests() -> Self {
        Self { tests: true, ..Self::default() }
    }

    pub fn select() -> Self {
        Self { correlogram: true, selection: true, ..Self::default() }
    }

    pub fn fit() -> Self {
        Self { estimate: true, smoothing: true, ..Self::default() }
    }

    pub fn forecast() -> Self {
        Self { forecasts: true, ..Self::default() }
    }

    pub fn full() -> Self {
        Self {
            describe: true,
            tests: true,
            correlogram: true,
            selection: true,
            estimate: true,
            smoothing: true,
            forecasts: true,
            evaluation: true,
        }
    }

    /// Adds the stages each requested stage depends on.
    pub fn resolved(mut self, config: &PipelineConfig) -> Self {
        if self.evaluation {
            self.forecasts = true;
        }
        if self.forecasts && config.zoo.selected {
            self.selection = true;
        }
        if self.estimate {
            self.selection = true;
        }
        self
    }
}

fn skip<T>(what: &str) -> Block<T> {
    Block::skipped(format!("{what} not requested in this run"))
}

/// Runs the complete pipeline.
pub fn run_pipeline(config: &PipelineConfig) -> Result<PipelineReport> {
    run_stages(config, StagePlan::full())
}

pub fn run_stages(config: &PipelineConfig, plan: StagePlan) -> Result<PipelineReport> {
    config.validate()?;
    let started_at = Utc::now().to_rfc3339();
    let prices = ingest_csv(&config.input, &config.date_column, &config.rate_column)?;
    let input_sha256 = file_sha256(&config.input)?;
    let mut report = analyse(config, &prices, plan)?;
    report.provenance.bundled_snapshot = input_sha256 == SNAPSHOT_SHA256.trim();
    report.provenance.input = config.input.display().to_string();
    report.provenance.input_sha256 = input_sha256;
    report.provenance.started_at = started_at;
    report.provenance.finished_at = Utc::now().to_rfc3339();
    Ok(report)
}

/// Runs the requested stages on an in-memory price series. Provenance
/// fields tied to the input file are left empty.
pub fn analyse(config: &PipelineConfig, prices: &PriceSeries, plan: StagePlan) -> Result<PipelineReport> {
    let plan = plan.resolved(config);
    let returns = compute_returns(prices).map_err(PipelineError::stage(Stage::Split))?;
    let parts = match config.split.train_len {
        Some(len) => split_at(&returns, len),
        None => SplitSpec::new(config.split.train_fraction).and_then(|s| split(&returns, s)),
    }
    .map_err(PipelineError::stage(Stage::Split))?;
    let train = parts.train.values();
    let test = parts.test.values();
    log::info!("{} returns: {} train, {} test", returns.len(), train.len(), test.len());

    let mut report = PipelineReport {
        provenance: Provenance {
            tool_version: env!("CARGO_PKG_VERSION").into(),
            config_sha256: config.fingerprint(),
            input: String::new(),
            input_sha256: String::new(),
            bundled_snapshot: false,
            started_at: String::new(),
            finished_at: String::new(),
            n_prices: prices.len(),
            n_returns: returns.len(),
            train_len: train.len(),
            test_len: test.len(),
            first_date: prices.dates()[0],
            last_date: *prices.dates().last().expect("non-empty"),
        },
        series: SeriesBlock {
            dates: returns.dates().to_vec(),
            returns: returns.values().to_vec(),
        }
        .into(),
        descriptive: skip("descriptive statistics"),
        frequency: skip("frequency discrimination"),
        runs: skip("runs tests"),
        unit_root: skip("unit-root tests"),
        differenced_stationarity: skip("stationarity tests"),
        breaks: skip("structural-break tests"),
        correlogram: skip("correlogram"),
        selection: skip("model selection"),
        estimate: skip("model estimation"),
        ljung_box: skip("residual autocorrelation tests"),
        smoothing: skip("exponential smoothing"),
        forecasts: skip("forecasting"),
        leaderboard: skip("forecast evaluation"),
    };

    if plan.describe {
        let st = PipelineError::stage(Stage::Describe);
        report.descriptive = describe_values(train).map_err(st)?.into();
        let counts = frequency_discrimination(&parts.train).map_err(PipelineError::stage(Stage::Describe))?;
        report.frequency = FrequencyBlock {
            percentages: counts.percentages(),
            counts,
            leverage_correlation: leverage_correlation(&parts.train)
                .map_err(PipelineError::stage(Stage::Describe))?,
        }
        .into();
    }

    if plan.tests {
        run_tests(config, &parts.train, &mut report).map_err(PipelineError::stage(Stage::Tests))?;
    }

    let d = config.arima.d;
    if plan.correlogram {
        let diffed = difference(&parts.train, d).map_err(PipelineError::stage(Stage::Correlogram))?;
        report.correlogram = correlogram(diffed.values(), config.arima.correlogram_lags)
            .map_err(PipelineError::stage(Stage::Correlogram))?
            .into();
    }

    let mut grid: Vec<ArimaFit> = Vec::new();
    if plan.selection {
        let (block, fits) = run_selection(config, train)?;
        report.selection = block.into();
        grid = fits;
    }

    if plan.estimate {
        let fit = grid.first().expect("selection precedes estimation");
        let (estimate, lb) = residual_diagnostics(config, fit).map_err(PipelineError::stage(Stage::Fit))?;
        report.estimate = estimate.into();
        report.ljung_box = lb.into();
    }

    let mut brown: Option<SmoothingFit> = None;
    let mut holt: Option<SmoothingFit> = None;
    if plan.smoothing || plan.forecasts {
        let opts = SmoothingOptions {
            grid_step: config.smoothing.grid_step,
            convention: config.smoothing.convention,
        };
        let b = fit_brown_with(train, &opts).map_err(PipelineError::stage(Stage::Smoothing))?;
        let h = fit_holt_with(train, &opts).map_err(PipelineError::stage(Stage::Smoothing))?;
        if plan.smoothing {
            report.smoothing = SmoothingBlock {
                nobs: train.len(),
                rows: vec![smoothing_row("Holt", &h), smoothing_row("Brown", &b)],
            }
            .into();
        }
        brown = Some(b);
        holt = Some(h);
    }

    if plan.forecasts {
        let models = zoo_forecasts(config, train, test, &grid, brown.as_ref(), holt.as_ref())?;
        report.forecasts = ForecastBlock {
            scheme: config.arima.scheme,
            dates: parts.test.dates().to_vec(),
            actual: test.to_vec(),
            models,
        }
        .into();
    }

    if plan.evaluation {
        let fb = report.forecasts.value().expect("forecasts precede evaluation");
        let named: Vec<(&str, Vec<f64>)> = fb
            .models
            .iter()
            .map(|m| (m.model_id.as_str(), m.values.clone()))
            .collect();
        let leaderboard = evaluate(&named, test).map_err(PipelineError::stage(Stage::Evaluation))?;
        report.leaderboard = LeaderboardBlock {
            overall_ranking: leaderboard.overall_ranking(),
            leaderboard,
        }
        .into();
    }
    Ok(report)
}

fn run_tests(
    config: &PipelineConfig,
    train: &fxcast_core::series::ReturnSeries,
    report: &mut PipelineReport,
) -> fxcast_core::Result<()> {
    let x = train.values();
    let level = config.tests.level;
    report.runs = [ThresholdKind::Mean, ThresholdKind::Median, ThresholdKind::Mode]
        .into_iter()
        .map(|k| runs_test(x, k, config.tests.runs_ties))
        .collect::<fxcast_core::Result<Vec<_>>>()?
        .into();

    let labelled = |label: &str, result| LabelledTest { label: label.into(), result };
    let pure_and_trend = [
        ("Pure", Deterministic::None),
        ("Intercept and Trend", Deterministic::ConstantTrend),
    ];
    let kpss_types = [
        ("Intercept", Deterministic::Constant),
        ("Intercept and Trend", Deterministic::ConstantTrend),
    ];
    let mut adf = Vec::new();
    let mut pp = Vec::new();
    for (label, det) in pure_and_trend {
        adf.push(labelled(label, adf_test(x, det, AdfLagRule::default(), level)?));
        pp.push(labelled(label, pp_test(x, det, BandwidthRule::NeweyWest, level)?));
    }
    let kpss = kpss_types
        .iter()
        .map(|&(label, det)| Ok(labelled(label, kpss_test(x, det, BandwidthRule::NeweyWest, level)?)))
        .collect::<fxcast_core::Result<Vec<_>>>()?;
    report.unit_root = UnitRootBlock { adf, pp, kpss }.into();

    let diffed = difference(train, config.arima.d.max(1))?;
    report.differenced_stationarity = kpss_types
        .iter()
        .map(|&(label, det)| {
            Ok(labelled(label, kpss_test(diffed.values(), det, BandwidthRule::NeweyWest, level)?))
        })
        .collect::<fxcast_core::Result<Vec<_>>>()?
        .into();

    let bp = &config.bai_perron;
    report.breaks = bai_perron(
        x,
        &BaiPerronConfig {
            max_breaks: bp.max_breaks,
            trimming: bp.trimming,
            critical_values: bp.critical_values.clone(),
            hac_lags: None,
        },
    )?
    .into();
    Ok(())
}

/// Best entry under `criterion`: lowest value, then fewer parameters, then
/// fewer AR lags.
fn pick(ranked: &[SelectionEntry], criterion: Criterion) -> Option<&SelectionEntry> {
    let value = |e: &SelectionEntry| match criterion {
        Criterion::Aic => e.aic,
        Criterion::Bic => e.bic,
        Criterion::Hq => e.hq,
    };
    ranked.iter().min_by(|a, b| {
        value(a)
            .total_cmp(&value(b))
            .then((a.spec.p + a.spec.q).cmp(&(b.spec.p + b.spec.q)))
            .then(a.spec.p.cmp(&b.spec.p))
    })
}

/// Returns the selection summary and the grid's fits, best first.
fn run_selection(config: &PipelineConfig, train: &[f64]) -> Result<(SelectionBlock, Vec<ArimaFit>)> {
    let a = &config.arima;
    let st = PipelineError::stage(Stage::Selection);
    let selection = arima::select(
        train,
        a.p_min..=a.p_max,
        a.q_min..=a.q_max,
        a.d,
        a.include_constant,
        a.criterion,
    )
    .map_err(st)?;
    let picks = [Criterion::Aic, Criterion::Bic, Criterion::Hq]
        .into_iter()
        .filter_map(|c| {
            pick(&selection.ranked, c).map(|e| CriterionPick {
                criterion: c,
                value: c_value(e, c),
                spec: e.spec,
            })
        })
        .collect();
    let fits = selection.fits;
    Ok((
        SelectionBlock {
            criterion: a.criterion,
            p_range: (a.p_min, a.p_max),
            q_range: (a.q_min, a.q_max),
            d: a.d,
            picks,
            ranked: selection.ranked,
            failures: selection.failures,
        },
        fits,
    ))
}

fn c_value(e: &SelectionEntry, c: Criterion) -> f64 {
    match c {
        Criterion::Aic => e.aic,
        Criterion::Bic => e.bic,
        Criterion::Hq => e.hq,
    }
}

fn residual_diagnostics(
    config: &PipelineConfig,
    fit: &ArimaFit,
) -> fxcast_core::Result<(EstimateBlock, LjungBoxBlock)> {
    let level = config.tests.level;
    let fitted_params = fit.spec.p + fit.spec.q;
    let lb_lags: Vec<usize> = config
        .arima
        .ljung_box_lags
        .iter()
        .copied()
        .filter(|&h| h > fitted_params)
        .collect();
    let rows = if lb_lags.is_empty() {
        Vec::new()
    } else {
        ljung_box(&fit.residuals, &lb_lags, fitted_params)?
    };
    let estimate = EstimateBlock {
        spec: fit.spec,
        coefficients: fit
            .coefficients
            .iter()
            .map(|c| CoefficientRow {
                name: c.name.clone(),
                value: c.value,
                std_error: finite(c.std_error),
                t_stat: finite(c.t_stat),
                p_value: finite(c.p_value),
            })
            .collect(),
        sigma2: fit.sigma2,
        log_likelihood: fit.log_likelihood,
        r_squared: finite(fit.r_squared),
        adj_r_squared: finite(fit.adj_r_squared),
        f_stat: finite(fit.f_stat),
        f_p_value: finite(fit.f_p_value),
        aic: fit.aic,
        bic: fit.bic,
        hq: fit.hq,
        nobs: fit.nobs,
        boundary: fit.boundary,
        residual_normality: jarque_bera(&fit.residuals, level)?,
        residual_arch: arch_lm(&fit.residuals, config.arima.arch_lags, level)?,
    };
    Ok((
        estimate,
        LjungBoxBlock {
            model: fit.spec,
            fitted_params,
            rows,
        },
    ))
}

fn smoothing_row(model: &str, fit: &SmoothingFit) -> SmoothingRow {
    SmoothingRow {
        model: model.into(),
        alpha: fit.alpha,
        beta: fit.beta,
        ssr: fit.ssr,
        rmse: fit.rmse,
        n_errors: fit.n_errors,
        alpha_identified: fit.alpha_identified,
    }
}

/// Display name of a zoo ARIMA entry.
fn model_label(spec: &ArimaSpec, kind: ZooKind) -> String {
    match kind {
        ZooKind::Ar => format!("AR({})", spec.p),
        ZooKind::Ma => format!("MA({})", spec.q),
        ZooKind::Arima => spec.to_string(),
    }
}

#[derive(Clone, Copy)]
enum ZooKind {
    Arima,
    Ar,
    Ma,
}

fn zoo_forecasts(
    config: &PipelineConfig,
    train: &[f64],
    test: &[f64],
    grid: &[ArimaFit],
    brown: Option<&SmoothingFit>,
    holt: Option<&SmoothingFit>,
) -> Result<Vec<NamedForecast>> {
    let zoo = &config.zoo;
    let a = &config.arima;
    let h = test.len();
    let scheme = a.scheme;
    let spec = |p, d, q| {
        ArimaSpec::new(p, d, q, a.include_constant).map_err(PipelineError::stage(Stage::Fit))
    };

    // ARIMA-family entries in report order, deduplicated by label.
    let mut entries: Vec<(String, ArimaSpec)> = Vec::new();
    let mut push = |label: String, s: ArimaSpec| {
        if !entries.iter().any(|(l, _)| *l == label) {
            entries.push((label, s));
        }
    };
    if let (true, Some(fit)) = (zoo.selected, grid.first()) {
        push(model_label(&fit.spec, ZooKind::Arima), fit.spec);
    }
    for &[p, d, q] in &zoo.arima {
        let s = spec(p, d, q)?;
        push(model_label(&s, ZooKind::Arima), s);
    }
    for &p in &zoo.ar {
        let s = spec(p, a.d, 0)?;
        push(model_label(&s, ZooKind::Ar), s);
    }
    for &q in &zoo.ma {
        let s = spec(0, a.d, q)?;
        push(model_label(&s, ZooKind::Ma), s);
    }

    // Independent fits run concurrently; collection keeps report order.
    let forecasts: Vec<NamedForecast> = entries
        .par_iter()
        .map(|(label, s)| {
            let owned;
            let fit = match grid.iter().find(|f| f.spec == *s) {
                Some(f) => f,
                None => {
                    owned = arima::fit(train, *s).map_err(PipelineError::stage(Stage::Fit))?;
                    &owned
                }
            };
            let values = match scheme {
                ForecastScheme::Static => arima::forecast(fit, train, h),
                ForecastScheme::Rolling => arima::forecast_rolling(fit, train, test),
            }
            .map_err(PipelineError::stage(Stage::Forecast))?;
            Ok(NamedForecast { model_id: label.clone(), values })
        })
        .collect::<Result<_>>()?;
    let mut out = forecasts;

    let fstage = PipelineError::stage;
    if zoo.random_walk {
        let values = match scheme {
            ForecastScheme::Static => naive_forecast(train, h).map_err(fstage(Stage::Forecast))?,
            ForecastScheme::Rolling => std::iter::once(train[train.len() - 1])
                .chain(test[..h - 1].iter().copied())
                .collect(),
        };
        out.push(NamedForecast { model_id: "Random Walk".into(), values });
    }
    if zoo.mean_index {
        let values = match scheme {
            ForecastScheme::Static => mean_forecast(train, h).map_err(fstage(Stage::Forecast))?,
            ForecastScheme::Rolling => {
                let mut sum: f64 = train.iter().sum();
                let mut n = train.len() as f64;
                test.iter()
                    .map(|&y| {
                        let m = sum / n;
                        sum += y;
                        n += 1.0;
                        m
                    })
                    .collect()
            }
        };
        out.push(NamedForecast { model_id: "Mean Index".into(), values });
    }
    if zoo.brown {
        let fit = brown.expect("smoothing precedes forecasting");
        let values = match scheme {
            ForecastScheme::Static => smoothing_forecast(fit, h).map_err(fstage(Stage::Forecast))?,
            ForecastScheme::Rolling => {
                let all: Vec<f64> = train.iter().chain(test).copied().collect();
                let run = brown_filter(&all, fit.alpha).map_err(fstage(Stage::Forecast))?;
                run.fitted[train.len() - 1..all.len() - 1].to_vec()
            }
        };
        out.push(NamedForecast { model_id: "Brown's Smoothing".into(), values });
    }
    if zoo.holt {
        let fit = holt.expect("smoothing precedes forecasting");
        let values = match scheme {
            ForecastScheme::Static => smoothing_forecast(fit, h).map_err(fstage(Stage::Forecast))?,
            ForecastScheme::Rolling => {
                let all: Vec<f64> = train.iter().chain(test).copied().collect();
                let beta = fit.beta.unwrap_or(0.0);
                let run = fxcast_core::smoothing::holt_filter(&all, fit.alpha, beta)
                    .map_err(fstage(Stage::Forecast))?;
                let trend = run.trend_state.as_deref().unwrap_or(&[]);
                (train.len() - 1..all.len() - 1)
                    .map(|t| run.fitted[t] + trend.get(t).copied().unwrap_or(0.0))
                    .collect()
            }
        };
        out.push(NamedForecast { model_id: "Holt's Smoothing".into(), values });
    }
    Ok(out)
}
