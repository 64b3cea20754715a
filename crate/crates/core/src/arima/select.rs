use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::estimate::fit_with;
use super::{ArimaFit, ArimaSpec, FitOptions};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Criterion {
    Aic,
    #[default]
    Bic,
    Hq,
}

impl Criterion {
    pub fn value(&self, fit: &ArimaFit) -> f64 {
        match self {
            Criterion::Aic => fit.aic,
            Criterion::Bic => fit.bic,
            Criterion::Hq => fit.hq,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Criterion::Aic => "AIC",
            Criterion::Bic => "BIC",
            Criterion::Hq => "HQ",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionEntry {
    pub spec: ArimaSpec,
    pub value: f64,
    pub aic: f64,
    pub bic: f64,
    pub hq: f64,
    pub log_likelihood: f64,
    pub boundary: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    pub criterion: Criterion,
    /// Ascending by criterion value.
    pub ranked: Vec<SelectionEntry>,
    /// Grid cells whose fit failed, with the reason.
    pub failures: Vec<(ArimaSpec, String)>,
    /// The fitted models, aligned with `ranked`.
    #[serde(skip)]
    pub fits: Vec<ArimaFit>,
}

impl Selection {
    pub fn best(&self) -> &SelectionEntry {
        &self.ranked[0]
    }

    pub fn best_fit(&self) -> &ArimaFit {
        &self.fits[0]
    }

    /// The grid's fit of `spec`, if it was part of the grid and converged.
    pub fn fit_for(&self, spec: &ArimaSpec) -> Option<&ArimaFit> {
        self.fits.iter().find(|f| f.spec == *spec)
    }
}

/// Fits every `(p, q)` cell of the grid (in parallel) and ranks the
/// successful fits by `criterion`. Ties go to the smaller `p + q`, then the
/// smaller `p`.
pub fn select(
    series: &[f64],
    p_range: RangeInclusive<usize>,
    q_range: RangeInclusive<usize>,
    d: usize,
    include_constant: bool,
    criterion: Criterion,
) -> Result<Selection> {
    if p_range.is_empty() || q_range.is_empty() {
        return Err(Error::InvalidArgument("empty order range".into()));
    }
    let specs: Vec<ArimaSpec> = p_range
        .flat_map(|p| q_range.clone().map(move |q| (p, q)))
        .filter_map(|(p, q)| ArimaSpec::new(p, d, q, include_constant).ok())
        .collect();
    if specs.is_empty() {
        return Err(Error::InvalidArgument("no valid model in the grid".into()));
    }
    let options = FitOptions::default();
    let results: Vec<(ArimaSpec, Result<ArimaFit>)> = specs
        .par_iter()
        .map(|&spec| (spec, fit_with(series, spec, &options)))
        .collect();

    let mut scored = Vec::new();
    let mut failures = Vec::new();
    for (spec, res) in results {
        match res {
            Ok(fit) => scored.push((
                SelectionEntry {
                    spec,
                    value: criterion.value(&fit),
                    aic: fit.aic,
                    bic: fit.bic,
                    hq: fit.hq,
                    log_likelihood: fit.log_likelihood,
                    boundary: fit.boundary,
                },
                fit,
            )),
            Err(e) => failures.push((spec, e.to_string())),
        }
    }
    if scored.is_empty() {
        return Err(Error::AllFitsFailed);
    }
    scored.sort_by(|(a, _), (b, _)| {
        a.value
            .total_cmp(&b.value)
            .then((a.spec.p + a.spec.q).cmp(&(b.spec.p + b.spec.q)))
            .then(a.spec.p.cmp(&b.spec.p))
    });
    let (ranked, fits) = scored.into_iter().unzip();
    Ok(Selection {
        criterion,
        ranked,
        failures,
        fits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series() -> Vec<f64> {
        (0..120)
            .map(|i| ((i * 37 % 17) as f64 - 8.0) / 4.0 + 0.1 * (i as f64).sin())
            .collect()
    }

    #[test]
    fn singleton_grid() {
        for c in [Criterion::Aic, Criterion::Bic, Criterion::Hq] {
            let s = select(&series(), 2..=2, 1..=1, 0, true, c).unwrap();
            assert_eq!(s.ranked.len(), 1);
            assert_eq!((s.best().spec.p, s.best().spec.q), (2, 1));
        }
    }

    #[test]
    fn ranking_is_sorted() {
        let s = select(&series(), 0..=2, 0..=1, 0, true, Criterion::Aic).unwrap();
        assert_eq!(s.ranked.len() + s.failures.len(), 6);
        assert!(s.ranked.windows(2).all(|w| w[0].value <= w[1].value));
    }

    #[test]
    fn empty_range() {
        #[allow(clippy::reversed_empty_ranges)]
        let r = select(&series(), 3..=1, 1..=1, 0, true, Criterion::Bic);
        assert!(r.is_err());
    }
}
