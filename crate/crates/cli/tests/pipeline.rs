use std::path::PathBuf;
use std::sync::OnceLock;

use fxcast::config::{ArimaConfig, PipelineConfig, SplitConfig, ZooConfig};
use fxcast::ingest::{file_sha256, SNAPSHOT_SHA256};
use fxcast::render::render_named;
use fxcast::{
    emit_plot_data, ingest_csv, parse_report, run_pipeline, run_stages, BlockStatus, ConfigError,
    Format, PipelineError, PipelineReport, PlotError, StagePlan,
};

fn snapshot() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/usdtry_2022.csv")
}

/// Snapshot configuration with a small order grid to keep the suite quick.
fn small_config() -> PipelineConfig {
    PipelineConfig {
        input: snapshot(),
        split: SplitConfig { train_len: Some(179), ..SplitConfig::default() },
        arima: ArimaConfig { p_max: 2, q_max: 2, ..ArimaConfig::default() },
        zoo: ZooConfig { arima: vec![[2, 1, 1]], ar: vec![2], ma: vec![1], holt: true, ..ZooConfig::default() },
        ..PipelineConfig::default()
    }
}

fn report() -> &'static PipelineReport {
    static REPORT: OnceLock<PipelineReport> = OnceLock::new();
    REPORT.get_or_init(|| run_pipeline(&small_config()).expect("pipeline runs"))
}

#[test]
fn snapshot_ingests_and_matches_hash() {
    let prices = ingest_csv(&snapshot(), "date", "rate").unwrap();
    assert_eq!(prices.len(), 213);
    assert_eq!(file_sha256(&snapshot()).unwrap(), SNAPSHOT_SHA256.trim());
    let p = &report().provenance;
    assert!(p.bundled_snapshot);
    assert_eq!((p.n_prices, p.n_returns, p.train_len, p.test_len), (213, 212, 179, 33));
}

#[test]
fn every_table_is_present() {
    let r = report();
    for (n, name) in PipelineReport::TABLES {
        assert_eq!(r.table_status(n), Some(BlockStatus::Present), "table {n} {name}");
    }
    assert_eq!(r.table_status(12), None);
    assert!(r.series.is_present() && r.correlogram.is_present() && r.forecasts.is_present());
}

#[test]
fn zoo_is_deduplicated_and_aligned() {
    let f = report().forecasts.value().unwrap();
    let ids: Vec<&str> = f.models.iter().map(|m| m.model_id.as_str()).collect();
    let mut unique = ids.clone();
    unique.sort();
    unique.dedup();
    assert_eq!(unique.len(), ids.len(), "{ids:?}");
    for id in ["AR(2)", "MA(1)", "Random Walk", "Mean Index", "Brown's Smoothing", "Holt's Smoothing"] {
        assert!(ids.contains(&id), "{id} missing from {ids:?}");
    }
    assert!(f.models.iter().all(|m| m.values.len() == f.actual.len()));
    assert_eq!(f.dates.len(), 33);
    let lb = &report().leaderboard.value().unwrap().leaderboard;
    assert_eq!(lb.rows.len(), ids.len());
}

#[test]
fn json_round_trips() {
    let r = report();
    let json = render_named(r, "json").unwrap();
    assert_eq!(&parse_report(&json).unwrap(), r);
}

#[test]
fn runs_are_deterministic() {
    let again = run_pipeline(&small_config()).unwrap();
    assert_eq!(again.without_timestamps(), report().without_timestamps());
}

#[test]
fn naive_only_zoo_gives_one_row() {
    let config = PipelineConfig { zoo: ZooConfig::naive_only(), ..small_config() };
    let r = run_stages(&config, StagePlan::full()).unwrap();
    let lb = r.leaderboard.value().unwrap();
    assert_eq!(lb.leaderboard.rows.len(), 1);
    assert_eq!(lb.overall_ranking[0].0, "Random Walk");
}

#[test]
fn partial_plans_skip_with_reasons() {
    let r = run_stages(&small_config(), StagePlan::describe()).unwrap();
    assert!(r.descriptive.is_present());
    match r.table_status(11) {
        Some(BlockStatus::Skipped(reason)) => assert!(!reason.is_empty()),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn text_and_csv_renderings() {
    let r = report();
    let text = String::from_utf8(render_named(r, "text").unwrap()).unwrap();
    for (n, name) in PipelineReport::TABLES {
        assert!(text.contains(&format!("Table {n}. {name}")), "missing table {n}");
    }
    assert!(text.contains('*'));

    let csv = String::from_utf8(render_named(r, "csv").unwrap()).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "model,rmse,mae,smape,smape_skipped,best");
    let rows = r.leaderboard.value().unwrap().leaderboard.rows.len();
    assert_eq!(lines.len(), rows + 1);
}

#[test]
fn unknown_format_is_typed() {
    let err = render_named(report(), "yaml").unwrap_err();
    assert!(matches!(err, ConfigError::UnknownToken { .. }), "{err}");
    assert!("pdf".parse::<Format>().is_err());
}

#[test]
fn plot_data_files() {
    let dir = tempfile::tempdir().unwrap();
    let paths = emit_plot_data(report(), dir.path()).unwrap();
    assert_eq!(paths.len(), 2);

    let mut rdr = csv::Reader::from_path(dir.path().join("returns.csv")).unwrap();
    assert_eq!(rdr.headers().unwrap(), vec!["date", "value"]);
    assert_eq!(rdr.records().count(), 212);

    let mut rdr = csv::Reader::from_path(dir.path().join("correlogram.csv")).unwrap();
    assert_eq!(rdr.headers().unwrap(), vec!["lag", "acf", "pacf", "band"]);
    let first = rdr.records().next().unwrap().unwrap();
    assert_eq!(&first[0], "1");
    assert!(first[1].parse::<f64>().unwrap().abs() <= 1.0);

    // A regular file where the directory should go.
    let blocker = dir.path().join("blocker");
    std::fs::write(&blocker, b"").unwrap();
    let err = emit_plot_data(report(), &blocker.join("plots")).unwrap_err();
    assert!(matches!(err, PlotError::Io { .. }), "{err}");
}

#[test]
fn failures_are_typed() {
    let missing = PipelineConfig { input: "does/not/exist.csv".into(), ..small_config() };
    let err = run_pipeline(&missing).unwrap_err();
    assert!(matches!(err, PipelineError::Ingest(_)), "{err}");
    assert_eq!(err.exit_code(), fxcast::error::EXIT_DATA);

    let bad = PipelineConfig {
        split: SplitConfig { train_fraction: 1.5, train_len: None },
        ..small_config()
    };
    let err = run_pipeline(&bad).unwrap_err();
    assert_eq!(err.exit_code(), fxcast::error::EXIT_CONFIG, "{err}");
}
