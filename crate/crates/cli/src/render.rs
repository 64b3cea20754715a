//! Text, JSON and CSV renderings of a [`PipelineReport`].

use std::fmt::Write as _;
use std::str::FromStr;

use fxcast_core::evaluation::Metric;
use fxcast_core::stat_tests::TestResult;
use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::report::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Text => "txt",
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

impl FromStr for Format {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "text" | "txt" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(ConfigError::UnknownToken {
                kind: "format",
                token: s.to_owned(),
            }),
        }
    }
}

/// Renders by format token; unknown tokens are an error.
pub fn render_named(report: &PipelineReport, format: &str) -> Result<Vec<u8>, ConfigError> {
    Ok(render_report(report, format.parse()?))
}

pub fn render_report(report: &PipelineReport, format: Format) -> Vec<u8> {
    match format {
        Format::Text => render_text(report).into_bytes(),
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(report).expect("report serialises");
            out.push(b'\n');
            out
        }
        Format::Csv => render_leaderboard_csv(report),
    }
}

/// Inverse of the JSON rendering.
pub fn parse_report(json: &[u8]) -> serde_json::Result<PipelineReport> {
    serde_json::from_slice(json)
}

fn render_leaderboard_csv(report: &PipelineReport) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["model", "rmse", "mae", "smape", "smape_skipped", "best"])
        .expect("in-memory write");
    if let Some(lb) = report.leaderboard.value() {
        for row in &lb.leaderboard.rows {
            let best: Vec<String> = Metric::ALL
                .iter()
                .filter(|m| lb.leaderboard.is_best(**m, &row.model_id))
                .map(|m| m.to_string())
                .collect();
            w.write_record([
                row.model_id.clone(),
                row.rmse.to_string(),
                row.mae.to_string(),
                row.smape.to_string(),
                row.smape_skipped.to_string(),
                best.join(";"),
            ])
            .expect("in-memory write");
        }
    }
    w.into_inner().expect("in-memory flush")
}

fn opt(x: Option<f64>, prec: usize) -> String {
    x.map_or_else(|| "NA".into(), |v| format!("{v:.prec$}"))
}

fn title(out: &mut String, table: u8) {
    let name = PipelineReport::TABLES
        .iter()
        .find(|(n, _)| *n == table)
        .map_or("", |(_, t)| t);
    let _ = writeln!(out, "\nTable {table}. {name}");
    let _ = writeln!(out, "{}", "-".repeat(64));
}

fn skipped<T>(out: &mut String, block: &Block<T>) -> bool {
    if let Block::Skipped { reason } = block {
        let _ = writeln!(out, "(skipped: {reason})");
        true
    } else {
        false
    }
}

fn test_line(out: &mut String, label: &str, r: &TestResult, with_p: bool) {
    let _ = write!(out, "{label:<22}{:>12.3}{:>16.3}", r.statistic, r.critical_value);
    if with_p {
        let _ = write!(out, "{:>10}", opt(r.p_value, 3));
    }
    let _ = writeln!(out);
}

pub fn render_text(report: &PipelineReport) -> String {
    let mut out = String::new();
    let p = &report.provenance;
    let _ = writeln!(out, "Exchange-rate return analysis (fxcast {})", p.tool_version);
    let _ = writeln!(out, "input: {} (sha256 {})", p.input, p.input_sha256);
    let _ = writeln!(
        out,
        "sample: {} to {}, {} rates, {} returns ({} train / {} test)",
        p.first_date, p.last_date, p.n_prices, p.n_returns, p.train_len, p.test_len
    );
    let _ = writeln!(out, "config sha256: {}", p.config_sha256);

    title(&mut out, 1);
    if !skipped(&mut out, &report.descriptive) {
        let d = report.descriptive.value().expect("present");
        for (name, v) in [
            ("Mean", d.mean),
            ("Median", d.median),
            ("Mode", d.mode),
            ("Max", d.max),
            ("Min", d.min),
            ("Std. Dev", d.std_dev),
            ("Skewness", d.skewness),
            ("Kurtosis", d.kurtosis),
            ("J-B Stat.", d.jb_stat),
            ("J-B Prob.", d.jb_prob),
        ] {
            let _ = writeln!(out, "{name:<14}{v:>12.3}");
        }
    }

    title(&mut out, 2);
    if !skipped(&mut out, &report.frequency) {
        let f = report.frequency.value().expect("present");
        let c = &f.counts;
        let _ = writeln!(out, "{:<14}{:>12}{:>10}", "Value", "No. of Days", "Percent");
        for (name, n, pct) in [
            ("Zero", c.count_zero, f.percentages[0]),
            ("Negative", c.count_negative, f.percentages[1]),
            ("Positive", c.count_positive, f.percentages[2]),
        ] {
            let _ = writeln!(out, "{name:<14}{n:>12}{pct:>10.2}");
        }
        let _ = writeln!(out, "{:<14}{:>12}{:>10}", "Total", c.total(), 100);
        for (name, n) in [
            ("Max. days in negative returns", c.max_consecutive_negative_days),
            ("Max. days in positive returns", c.max_consecutive_positive_days),
            ("Max. days in an increasing trend", c.max_days_increasing),
            ("Max. days in a decreasing trend", c.max_days_decreasing),
        ] {
            let _ = writeln!(out, "{name:<36}{n:>6}");
        }
        let _ = writeln!(out, "Corr(R_t^2, R_t-1) = {:.4}", f.leverage_correlation);
    }

    title(&mut out, 3);
    if !skipped(&mut out, &report.runs) {
        let runs = report.runs.value().expect("present");
        let _ = write!(out, "{:<14}", "Threshold");
        for r in runs {
            let name = format!("{:?}", r.threshold_kind);
            let _ = write!(out, "{name:>12}");
        }
        let _ = writeln!(out);
        let rows: [(&str, fn(&fxcast_core::stat_tests::RunsResult) -> String); 5] = [
            ("R", |r| r.observed_runs.to_string()),
            ("R (Exp.)", |r| format!("{:.3}", r.expected_runs)),
            ("Std. Dev", |r| format!("{:.3}", r.std_dev)),
            ("Z-Stat.", |r| format!("{:.3}", r.z_stat)),
            ("Prob.", |r| format!("{:.3}", r.p_value)),
        ];
        for (name, f) in rows {
            let _ = write!(out, "{name:<14}");
            for r in runs {
                let _ = write!(out, "{:>12}", f(r));
            }
            let _ = writeln!(out);
        }
    }

    title(&mut out, 4);
    if !skipped(&mut out, &report.unit_root) {
        let u = report.unit_root.value().expect("present");
        for (name, rows) in [("ADF Test", &u.adf), ("P-P Test", &u.pp)] {
            let _ = writeln!(out, "{name} (null: unit root)");
            let _ = writeln!(out, "{:<22}{:>12}{:>16}{:>10}", "Type", "Statistic", "Critical Value", "Prob.");
            for t in rows {
                test_line(&mut out, &t.label, &t.result, true);
            }
        }
        let _ = writeln!(out, "KPSS Test (null: stationary)");
        let _ = writeln!(out, "{:<22}{:>12}{:>16}", "Type", "L-M Stat.", "Critical Value");
        for t in &u.kpss {
            test_line(&mut out, &t.label, &t.result, false);
        }
    }

    title(&mut out, 5);
    if !skipped(&mut out, &report.differenced_stationarity) {
        let _ = writeln!(out, "KPSS Test on differenced returns (null: stationary)");
        let _ = writeln!(out, "{:<22}{:>12}{:>16}", "Type", "L-M Stat.", "Critical Value");
        for t in report.differenced_stationarity.value().expect("present") {
            test_line(&mut out, &t.label, &t.result, false);
        }
    }

    title(&mut out, 6);
    if !skipped(&mut out, &report.breaks) {
        let b = report.breaks.value().expect("present");
        let _ = writeln!(out, "Bai-Perron L vs L+1 sequential tests, breaking variable: level (HAC)");
        let _ = writeln!(out, "{:<12}{:>12}{:>18}{:>16}", "Break Test", "F-Stat.", "Scaled F-Stat.", "Critical Value");
        for t in &b.tests {
            let _ = writeln!(
                out,
                "{:<12}{:>12.3}{:>18.3}{:>16.3}{}",
                t.label,
                t.f_stat,
                t.scaled_f_stat,
                t.critical_value,
                if t.reject { " *" } else { "" }
            );
        }
        let _ = writeln!(out, "Selected breaks: {} {:?}", b.selected_break_count, b.break_indices);
    }

    if let Block::Present { value: rows } = &report.correlogram {
        let _ = writeln!(out, "\nCorrelogram of differenced returns");
        let _ = writeln!(out, "{}", "-".repeat(64));
        let _ = writeln!(out, "{:>4}{:>10}{:>10}{:>10}", "Lag", "ACF", "PACF", "Band");
        for r in rows {
            let _ = writeln!(out, "{:>4}{:>10.3}{:>10.3}{:>10.3}", r.lag, r.acf, r.pacf, r.band);
        }
    }

    title(&mut out, 7);
    if !skipped(&mut out, &report.selection) {
        let s = report.selection.value().expect("present");
        let _ = writeln!(
            out,
            "ARIMA(p,{},q), p in [{}, {}], q in [{}, {}]; exact Gaussian ML",
            s.d, s.p_range.0, s.p_range.1, s.q_range.0, s.q_range.1
        );
        let _ = writeln!(out, "{:<10}{:>10}{:>16}", "Criterion", "Value", "Suggestion");
        for pk in &s.picks {
            let mark = if pk.criterion == s.criterion { " <" } else { "" };
            let _ = writeln!(out, "{:<10}{:>10.3}{:>16}{mark}", pk.criterion.label(), pk.value, pk.spec.to_string());
        }
        if !s.failures.is_empty() {
            let _ = writeln!(out, "{} candidate(s) failed to fit", s.failures.len());
        }
    }

    title(&mut out, 8);
    if !skipped(&mut out, &report.estimate) {
        let e = report.estimate.value().expect("present");
        let _ = writeln!(out, "Estimated model: {}", e.spec);
        let _ = writeln!(out, "{:<10}{:>10}{:>12}{:>10}{:>8}", "Variable", "Coef.", "Std. Err.", "t-Stat.", "Prob.");
        for c in &e.coefficients {
            let _ = writeln!(
                out,
                "{:<10}{:>10.3}{:>12}{:>10}{:>8}",
                c.name,
                c.value,
                opt(c.std_error, 3),
                opt(c.t_stat, 3),
                opt(c.p_value, 3)
            );
        }
        let _ = writeln!(out, "R-Sq {:>10}    AIC {:>8.3}", opt(e.r_squared, 3), e.aic);
        let _ = writeln!(out, "Adj. R-Sq {:>5}    BIC {:>8.3}", opt(e.adj_r_squared, 3), e.bic);
        let _ = writeln!(out, "F-Stat. {:>7}    H-Q {:>8.3}", opt(e.f_stat, 3), e.hq);
        let _ = writeln!(out, "F-Prob. {:>7}    Log-lik {:.3}", opt(e.f_p_value, 3), e.log_likelihood);
        if e.boundary {
            let _ = writeln!(out, "note: optimum on the invertibility/stationarity boundary; standard errors unreliable");
        }
        let _ = writeln!(
            out,
            "Normality: J-B {:.3} (prob {})",
            e.residual_normality.statistic,
            opt(e.residual_normality.p_value, 3)
        );
        let a = &e.residual_arch;
        let _ = writeln!(
            out,
            "ARCH: F {:.3} (F({}, {}) prob {:.3}); LM {:.3} (Chi-Sq({}) prob {})",
            a.f_stat,
            a.f_df.0,
            a.f_df.1,
            a.f_p_value,
            a.lm.statistic,
            a.f_df.0,
            opt(a.lm.p_value, 3)
        );
    }

    title(&mut out, 9);
    if !skipped(&mut out, &report.ljung_box) {
        let lb = report.ljung_box.value().expect("present");
        let _ = writeln!(out, "{} residuals, {} fitted parameters", lb.model, lb.fitted_params);
        let _ = writeln!(out, "{:>4}{:>10}{:>8}", "Lag", "Q-Stat.", "Prob.");
        for r in &lb.rows {
            let _ = writeln!(out, "{:>4}{:>10.3}{:>8.3}", r.lag, r.q_stat, r.p_value);
        }
    }

    title(&mut out, 10);
    if !skipped(&mut out, &report.smoothing) {
        let s = report.smoothing.value().expect("present");
        let _ = writeln!(out, "No. of observations: {}", s.nobs);
        let _ = writeln!(out, "{:<8}{:>10}{:>10}{:>16}{:>8}", "Model", "Alpha", "Beta", "Sum Sq-Resid.", "RMSE");
        for r in &s.rows {
            let _ = writeln!(
                out,
                "{:<8}{:>10.3}{:>10}{:>16.3}{:>8.3}",
                r.model,
                r.alpha,
                r.beta.map_or_else(|| "--".into(), |b| format!("{b:.3}")),
                r.ssr,
                r.rmse
            );
        }
    }

    title(&mut out, 11);
    if !skipped(&mut out, &report.leaderboard) {
        let lb = report.leaderboard.value().expect("present");
        let board = &lb.leaderboard;
        let _ = writeln!(out, "{:<20}{:>10}{:>10}{:>12}", "Model", "RMSE", "MAE", "SMAPE");
        for row in &board.rows {
            let cell = |m: Metric, v: f64, prec: usize| {
                let star = if board.is_best(m, &row.model_id) { "*" } else { " " };
                format!("{v:.prec$}{star}")
            };
            let _ = writeln!(
                out,
                "{:<20}{:>10}{:>10}{:>12}",
                row.model_id,
                cell(Metric::Rmse, row.rmse, 3),
                cell(Metric::Mae, row.mae, 3),
                cell(Metric::Smape, row.smape, 3)
            );
        }
        let _ = writeln!(out, "The * indicates the best model.");
        let skipped: usize = board.rows.iter().map(|r| r.smape_skipped).sum();
        if skipped > 0 {
            let _ = writeln!(out, "SMAPE skipped {skipped} zero/zero pair(s).");
        }
        let ranking: Vec<String> = lb
            .overall_ranking
            .iter()
            .map(|(m, r)| format!("{m} ({r:.2})"))
            .collect();
        let _ = writeln!(out, "Overall (mean rank): {}", ranking.join(", "));
    }
    out
}
