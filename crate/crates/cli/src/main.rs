use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use fxcast::error::{EXIT_CONFIG, EXIT_DATA, EXIT_NUMERICAL};
use fxcast::{
    emit_plot_data, mc, render_report, run_stages, ConfigError, Format, IngestError, Overrides,
    PipelineConfig, PipelineError, PlotError, StagePlan,
};

#[derive(Parser)]
#[command(name = "fxcast", version, about = "Exchange-rate return diagnostics, ARIMA/smoothing fits and forecast evaluation")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Input CSV (overrides the config).
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Model-selection criterion: aic, bic or hq.
    #[arg(long, global = true)]
    criterion: Option<String>,
    /// Forecast scheme: static or rolling.
    #[arg(long, global = true)]
    scheme: Option<String>,
    /// Output format(s): text, json, csv. Repeat or comma-separate.
    #[arg(long, global = true, value_delimiter = ',')]
    format: Option<Vec<String>>,
    /// Output directory for `report`.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Root seed for Monte Carlo suites.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Load and validate the input; print sample provenance.
    Ingest,
    /// Descriptive statistics and frequency tables.
    Describe,
    /// Runs, unit-root, stationarity and structural-break tests.
    Test,
    /// Correlogram and information-criterion model selection.
    Select,
    /// Estimate the selected ARIMA model and the smoothing models.
    Fit,
    /// Out-of-sample forecasts for every enabled model.
    Forecast,
    /// Forecast accuracy leaderboard.
    Evaluate,
    /// Full pipeline; writes every configured format and plot data to the output directory.
    Report,
    /// Monte Carlo size, power and recovery suites.
    Mc {
        #[arg(long, default_value_t = 1000)]
        reps: usize,
        #[arg(long, default_value_t = 500)]
        nobs: usize,
    },
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<PipelineError>() {
            return e.exit_code() as u8;
        }
        if cause.is::<ConfigError>() || cause.is::<PlotError>() {
            return EXIT_CONFIG as u8;
        }
        if cause.is::<IngestError>() {
            return EXIT_DATA as u8;
        }
        if cause.is::<fxcast_core::Error>() {
            return EXIT_NUMERICAL as u8;
        }
    }
    1
}

fn load_config(common: &Common) -> anyhow::Result<PipelineConfig> {
    let mut config = match &common.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    config.apply(&Overrides {
        input: common.input.clone(),
        criterion: common.criterion.clone(),
        scheme: common.scheme.clone(),
        formats: common.format.clone(),
        out_dir: common.out_dir.clone(),
        seed: common.seed,
    })?;
    Ok(config)
}

fn write(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    std::fs::write(path, bytes).map_err(|source| PipelineError::Output { path: path.to_owned(), source })?;
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let config = load_config(&cli.common)?;
    let plan = match cli.command {
        Command::Ingest => StagePlan::ingest(),
        Command::Describe => StagePlan::describe(),
        Command::Test => StagePlan::tests(),
        Command::Select => StagePlan::select(),
        Command::Fit => StagePlan::fit(),
        Command::Forecast => StagePlan::forecast(),
        Command::Evaluate | Command::Report => StagePlan::full(),
        Command::Mc { reps, nobs } => {
            let report = mc::run_all(config.seed, reps, nobs);
            if config.formats.contains(&Format::Json) && !config.formats.contains(&Format::Text) {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                for c in &report.checks {
                    println!(
                        "{:<42} {:>8.4}  [{:.3}, {:.3}]  {:>4} reps  {:>6.1}s  {}",
                        c.name,
                        c.value,
                        c.lower,
                        c.upper,
                        c.reps,
                        c.seconds,
                        if c.pass { "PASS" } else { "FAIL" }
                    );
                }
            }
            return Ok(report.all_pass());
        }
    };
    let is_report = matches!(cli.command, Command::Report);
    let report = run_stages(&config, plan).with_context(|| format!("input {}", config.input.display()))?;

    if is_report {
        std::fs::create_dir_all(&config.out_dir)
            .map_err(|source| PipelineError::Output { path: config.out_dir.clone(), source })?;
        for format in &config.formats {
            let path = config.out_dir.join(format!("report.{}", format.extension()));
            write(&path, &render_report(&report, *format))?;
            eprintln!("wrote {}", path.display());
        }
        for path in emit_plot_data(&report, &config.out_dir)? {
            eprintln!("wrote {}", path.display());
        }
        if config.formats.contains(&Format::Text) {
            print!("{}", String::from_utf8_lossy(&render_report(&report, Format::Text)));
        }
    } else {
        let format = config.formats[0];
        print!("{}", String::from_utf8_lossy(&render_report(&report, format)));
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
