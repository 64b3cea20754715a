//! Out-of-sample accuracy metrics and the model leaderboard.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Pairs with `|forecast| + |actual|` below this are left out of SMAPE.
pub const SMAPE_ZERO_TOL: f64 = 1e-12;

fn check(forecast: &[f64], actual: &[f64]) -> Result<()> {
    if forecast.len() != actual.len() {
        return Err(Error::LengthMismatch {
            left: forecast.len(),
            right: actual.len(),
        });
    }
    if actual.is_empty() {
        return Err(Error::TooShort { needed: 1, got: 0 });
    }
    Ok(())
}

pub fn rmse(forecast: &[f64], actual: &[f64]) -> Result<f64> {
    check(forecast, actual)?;
    let ss: f64 = forecast.iter().zip(actual).map(|(f, a)| (f - a).powi(2)).sum();
    Ok((ss / actual.len() as f64).sqrt())
}

pub fn mae(forecast: &[f64], actual: &[f64]) -> Result<f64> {
    check(forecast, actual)?;
    let s: f64 = forecast.iter().zip(actual).map(|(f, a)| (f - a).abs()).sum();
    Ok(s / actual.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Smape {
    pub value: f64,
    /// Pairs left out because both values were (numerically) zero.
    pub skipped: usize,
}

/// `200 * mean(|F - A| / (|F| + |A|))` over pairs that are not both zero.
pub fn smape_detailed(forecast: &[f64], actual: &[f64]) -> Result<Smape> {
    check(forecast, actual)?;
    let (mut sum, mut used) = (0.0, 0usize);
    for (f, a) in forecast.iter().zip(actual) {
        let denom = f.abs() + a.abs();
        if denom < SMAPE_ZERO_TOL {
            continue;
        }
        sum += (f - a).abs() / denom;
        used += 1;
    }
    if used == 0 {
        return Err(Error::Degenerate("every SMAPE pair is zero"));
    }
    Ok(Smape {
        value: 200.0 * sum / used as f64,
        skipped: actual.len() - used,
    })
}

pub fn smape(forecast: &[f64], actual: &[f64]) -> Result<f64> {
    smape_detailed(forecast, actual).map(|s| s.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Rmse,
    Smape,
    Mae,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::Rmse, Metric::Smape, Metric::Mae];

    pub fn of(&self, row: &EvaluationRow) -> f64 {
        match self {
            Metric::Rmse => row.rmse,
            Metric::Smape => row.smape,
            Metric::Mae => row.mae,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Rmse => "RMSE",
            Metric::Smape => "SMAPE",
            Metric::Mae => "MAE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationRow {
    pub model_id: String,
    pub rmse: f64,
    pub mae: f64,
    pub smape: f64,
    pub smape_skipped: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Leaderboard {
    pub rows: Vec<EvaluationRow>,
    pub best_per_criterion: BTreeMap<Metric, String>,
}

impl Leaderboard {
    pub fn is_best(&self, metric: Metric, model_id: &str) -> bool {
        self.best_per_criterion.get(&metric).is_some_and(|m| m == model_id)
    }

    pub fn row(&self, model_id: &str) -> Option<&EvaluationRow> {
        self.rows.iter().find(|r| r.model_id == model_id)
    }

    /// Models ordered by their mean rank over the three metrics (rank 1 is
    /// best; equal values share the better rank). Ties keep input order.
    pub fn overall_ranking(&self) -> Vec<(String, f64)> {
        let mut mean_rank = vec![0.0; self.rows.len()];
        for metric in Metric::ALL {
            for (i, row) in self.rows.iter().enumerate() {
                let v = metric.of(row);
                let better = self.rows.iter().filter(|r| metric.of(r) < v).count();
                mean_rank[i] += (better + 1) as f64 / Metric::ALL.len() as f64;
            }
        }
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by(|&a, &b| mean_rank[a].total_cmp(&mean_rank[b]));
        order
            .into_iter()
            .map(|i| (self.rows[i].model_id.clone(), mean_rank[i]))
            .collect()
    }
}

/// Scores each named forecast against `actual`, keeping input order. The
/// best mark of each metric goes to the first model attaining the minimum.
pub fn evaluate<S: AsRef<str>>(models: &[(S, Vec<f64>)], actual: &[f64]) -> Result<Leaderboard> {
    if models.is_empty() {
        return Err(Error::InvalidArgument("no models to evaluate".into()));
    }
    let rows = models
        .iter()
        .map(|(id, f)| {
            let s = smape_detailed(f, actual)?;
            Ok(EvaluationRow {
                model_id: id.as_ref().to_owned(),
                rmse: rmse(f, actual)?,
                mae: mae(f, actual)?,
                smape: s.value,
                smape_skipped: s.skipped,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let best_per_criterion = Metric::ALL
        .iter()
        .map(|m| {
            let mut best = &rows[0];
            for r in &rows[1..] {
                if m.of(r) < m.of(best) {
                    best = r;
                }
            }
            (*m, best.model_id.clone())
        })
        .collect();
    Ok(Leaderboard {
        rows,
        best_per_criterion,
    })
}
