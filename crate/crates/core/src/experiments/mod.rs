//! The desk-scale experiments. Each maps one asymptotic statement to an
//! estimator, reference values recomputed from the exact modules, and a
//! discrepancy summary, packaged as an [`ExperimentReport`].
//!
//! Ensembles are conditioned on certified `S_n` samples unless
//! `condition_sn` is off; the uncertified count is always reported.
//! Ramified and unramified primes are not separated in `Psi`: exact
//! valuations cover both.

mod lemma11;
mod linear;
mod moments;
mod psi;

use std::collections::BTreeMap;
use std::time::Duration;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub use lemma11::{run_lemma11, Lemma11Params};
pub use linear::{bks_constant, ray_class_data, run_linear_case, LinearParams, RayClass, RayClassData};
pub use moments::{run_expectation_pi, run_indicator_moments, PrimeStatParams};
pub use psi::{compute_psi, run_psi_ensemble, PrimeExponents, PsiEnsembleParams, PsiValue};

use crate::ensembles::{certify_sn_with_primes, PolynomialSample, SampleSource, DEFAULT_PRIME_BUDGET};
use crate::error::Result;
use crate::nf::NumberField;

/// Default `xi` of the range guards.
pub const DEFAULT_XI: f64 = 0.49;

/// Result of one experiment run: parameters, one CSV row per prime or per
/// sample, a summary and any warnings. Timing is kept out of the CSV so
/// reruns are byte-identical.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub params: Value,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub summary: BTreeMap<String, Value>,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl ExperimentReport {
    pub fn new(experiment: &str, params: Value, columns: &[&str]) -> Self {
        ExperimentReport {
            experiment: experiment.to_string(),
            params,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            summary: BTreeMap::new(),
            warnings: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.summary.insert(key.to_string(), value.into());
    }

    pub fn set_f64(&mut self, key: &str, value: f64) {
        self.summary.insert(key.to_string(), f64_value(value));
    }

    pub fn summary_f64(&self, key: &str) -> Option<f64> {
        self.summary.get(key).and_then(Value::as_f64)
    }

    /// The CSV header line (no trailing newline).
    pub fn header(&self) -> String {
        self.columns.join(",")
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory csv");
        for row in &self.rows {
            w.write_record(row).expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf-8 csv")
    }

    /// Column values by name.
    pub fn column(&self, name: &str) -> Option<Vec<&str>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i].as_str()).collect())
    }
}

/// JSON number, or `null` for non-finite values.
pub fn f64_value(v: f64) -> Value {
    serde_json::Number::from_f64(v).map(Value::Number).unwrap_or(Value::Null)
}

/// Shortest round-trip decimal, `nan`/`inf` spelled out.
pub fn fmt_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else {
        format!("{v}").to_lowercase()
    }
}

/// How the random polynomials of an experiment are drawn and filtered.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleParams {
    /// Degree `n`.
    pub n: usize,
    /// Height bound `N`.
    pub height: u64,
    pub source: SampleSource,
    /// Keep only samples with an `S_n` certificate.
    pub condition_sn: bool,
    /// Primes scanned per certificate.
    pub prime_budget: usize,
    /// Exponent of the range guards.
    pub xi: f64,
}

impl EnsembleParams {
    pub fn random(n: usize, height: u64, samples: u64, seed: u64) -> Self {
        EnsembleParams {
            n,
            height,
            source: SampleSource::Random { samples, seed },
            condition_sn: true,
            prime_budget: DEFAULT_PRIME_BUDGET,
            xi: DEFAULT_XI,
        }
    }

    pub(crate) fn to_json(&self, field: &NumberField) -> serde_json::Map<String, Value> {
        let mut m = serde_json::Map::new();
        m.insert("field".into(), field.spec().into());
        m.insert("n".into(), self.n.into());
        m.insert("N".into(), self.height.into());
        m.insert("mode".into(), self.source.mode_name().into());
        match &self.source {
            SampleSource::Random { samples, seed } => {
                m.insert("samples".into(), (*samples).into());
                m.insert("seed".into(), (*seed).into());
            }
            SampleSource::Fixed { poly } => {
                m.insert("poly".into(), poly.to_string().into());
            }
            SampleSource::Exhaustive => {}
        }
        m.insert("condition_sn".into(), self.condition_sn.into());
        m.insert("prime_budget".into(), self.prime_budget.into());
        m.insert("xi".into(), f64_value(self.xi));
        m
    }
}

/// One drawn polynomial and whether it passed the `S_n` filter.
#[derive(Debug, Clone)]
pub(crate) struct Drawn {
    pub index: u64,
    pub poly: PolynomialSample,
    pub certified: bool,
}

/// Draw every sample of the ensemble (in parallel, collated by index) and
/// certify it when conditioning is on.
pub(crate) fn draw(field: &NumberField, ens: &EnsembleParams) -> Result<Vec<Drawn>> {
    let total = ens.source.len(field, ens.n, ens.height)?;
    let primes = if ens.condition_sn {
        field.first_primes(ens.prime_budget)?
    } else {
        Vec::new()
    };
    let drawn = (0..total)
        .into_par_iter()
        .map(|index| {
            let poly = ens.source.get(field, ens.n, ens.height, index);
            let certified = !ens.condition_sn || certify_sn_with_primes(&poly, &primes).is_certified();
            Drawn { index, poly, certified }
        })
        .collect();
    Ok(drawn)
}

/// Record the conditioning outcome in the summary.
pub(crate) fn note_conditioning(report: &mut ExperimentReport, drawn: &[Drawn]) -> usize {
    let kept = drawn.iter().filter(|d| d.certified).count();
    report.set("samples_drawn", drawn.len());
    report.set("samples_used", kept);
    report.set("samples_uncertified", drawn.len() - kept);
    if !drawn.is_empty() {
        report.set_f64("uncertified_fraction", (drawn.len() - kept) as f64 / drawn.len() as f64);
    }
    kept
}

/// Mean, unbiased variance and standard error of the mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Moments {
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub std_error: f64,
}

pub(crate) fn moments(values: &[f64]) -> Moments {
    let count = values.len();
    if count == 0 {
        return Moments {
            count,
            mean: f64::NAN,
            variance: f64::NAN,
            std_error: f64::NAN,
        };
    }
    let mean = values.iter().sum::<f64>() / count as f64;
    let variance = if count > 1 {
        values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (count - 1) as f64
    } else {
        0.0
    };
    Moments {
        count,
        mean,
        variance,
        std_error: (variance / count as f64).sqrt(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let mut r = ExperimentReport::new("t", Value::Null, &["a", "b"]);
        r.push_row(vec!["1".into(), "x,y".into()]);
        assert_eq!(r.to_csv(), "a,b\n1,\"x,y\"\n");
        assert_eq!(r.column("b").unwrap(), vec!["x,y"]);
    }

    #[test]
    fn moment_helper() {
        let m = moments(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m.mean, 2.5);
        assert!((m.variance - 5.0 / 3.0).abs() < 1e-15);
        assert!(moments(&[]).mean.is_nan());
    }
}
