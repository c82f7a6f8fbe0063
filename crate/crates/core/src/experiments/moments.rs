use std::time::Instant;

use num_bigint::BigInt;
use serde_json::Value;

use super::{draw, fmt_f64, moments, note_conditioning, EnsembleParams, ExperimentReport};
use crate::arith::Rational;
use crate::ensembles::{frobenius_type, PolynomialSample};
use crate::error::{Error, Result};
use crate::nf::{NumberField, PrimeIdeal};
use crate::splitting::{census, to_f64};
use crate::splitting_type::SplittingType;

/// Ensemble, splitting type `r` and prime-norm bound `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimeStatParams {
    pub ensemble: EnsembleParams,
    pub r: SplittingType,
    pub x: u64,
}

impl PrimeStatParams {
    fn check(&self) -> Result<()> {
        if self.r.degree() != self.ensemble.n {
            return Err(Error::InvalidParameter(format!(
                "splitting type {} is not a partition of n = {}",
                self.r, self.ensemble.n
            )));
        }
        Ok(())
    }

    fn to_json(&self, field: &NumberField) -> Value {
        let mut json = self.ensemble.to_json(field);
        json.insert("r".into(), self.r.to_string().into());
        json.insert("x".into(), self.x.into());
        Value::Object(json)
    }
}

fn indicator(f: &PolynomialSample, prime: &PrimeIdeal, r: &SplittingType) -> bool {
    frobenius_type(f, prime).splitting_type() == Some(r)
}

/// Per prime of norm at most `x`: empirical mean and variance of the
/// indicator `1_{f,r}(P)` next to `delta + C_r/q`, the variance reference
/// `(delta - delta^2) + C_r (1 - 2 delta)/q` and the exact census share
/// `|X_{n,r}|(q)/q^n`. The empirical variance is the plug-in
/// `mean (1 - mean)` of a Bernoulli variable.
pub fn run_indicator_moments(field: &NumberField, params: &PrimeStatParams) -> Result<ExperimentReport> {
    let start = Instant::now();
    params.check()?;
    let ens = &params.ensemble;
    let mut report = ExperimentReport::new(
        "moments",
        params.to_json(field),
        &[
            "prime", "q", "ramified", "samples", "hits", "mean", "variance", "std_error", "ref_mean",
            "ref_variance", "exact_mean",
        ],
    );
    let cp = census(&params.r);
    let delta = to_f64(&cp.density());
    let c = to_f64(&cp.second_order());
    report.set("delta", cp.density().to_string());
    report.set("c_r", cp.second_order().to_string());

    let guard = (ens.height as f64).powf(field.degree() as f64 * ens.xi / (ens.n + 1) as f64);
    report.set_f64("range_guard", guard);
    if params.x as f64 >= guard {
        report
            .warnings
            .push(format!("x = {} is outside the range x < N^(d*xi/(n+1)) = {guard:.4}", params.x));
    }

    let drawn = draw(field, ens)?;
    let used: Vec<&PolynomialSample> = drawn.iter().filter(|d| d.certified).map(|d| &d.poly).collect();
    let m = note_conditioning(&mut report, &drawn);
    let mut worst = 0.0f64;
    for prime in field.primes_up_to(params.x)? {
        let q = prime.norm_u64().expect("bounded by x");
        let hits = used.iter().filter(|f| indicator(f, &prime, &params.r)).count();
        let mean = hits as f64 / m as f64;
        let variance = mean * (1.0 - mean);
        let std_error = (variance / m as f64).sqrt();
        let qf = q as f64;
        let ref_mean = delta + c / qf;
        let ref_variance = (delta - delta * delta) + c * (1.0 - 2.0 * delta) / qf;
        let exact = to_f64(&(cp.eval(q) / Rational::from_integer(BigInt::from(q).pow(ens.n as u32))));
        if prime.ramification() == 1 && mean.is_finite() {
            worst = worst.max((mean - ref_mean).abs());
        }
        report.push_row(vec![
            prime.label(),
            q.to_string(),
            (prime.ramification() > 1).to_string(),
            m.to_string(),
            hits.to_string(),
            fmt_f64(mean),
            fmt_f64(variance),
            fmt_f64(std_error),
            fmt_f64(ref_mean),
            fmt_f64(ref_variance),
            fmt_f64(exact),
        ]);
    }
    report.set_f64("max_abs_mean_deviation", worst);
    report.set("primes_tested", report.rows.len());
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Sample mean of `pi_{f,r}(x)` against `delta pi_K(x) + C_r log log x`.
/// One row per drawn sample; uncertified samples are listed with an empty
/// count and excluded from the statistics.
pub fn run_expectation_pi(field: &NumberField, params: &PrimeStatParams) -> Result<ExperimentReport> {
    let start = Instant::now();
    params.check()?;
    let ens = &params.ensemble;
    let mut report = ExperimentReport::new(
        "expectation-pi",
        params.to_json(field),
        &["sample", "poly", "certified", "pi_fr"],
    );
    if params.x < 16 {
        report
            .warnings
            .push(format!("x = {} < 16: the log log x term is not meaningful here", params.x));
    }
    let cp = census(&params.r);
    let delta = to_f64(&cp.density());
    let c = to_f64(&cp.second_order());
    let primes = field.primes_up_to(params.x)?;
    let pi_k = primes.len();
    let leading = delta * pi_k as f64;
    let reference = leading + c * (params.x as f64).ln().ln();

    let drawn = draw(field, ens)?;
    note_conditioning(&mut report, &drawn);
    let mut values = Vec::new();
    for d in &drawn {
        let pi = if d.certified {
            let v = primes.iter().filter(|p| indicator(&d.poly, p, &params.r)).count();
            values.push(v as f64);
            v.to_string()
        } else {
            String::new()
        };
        report.push_row(vec![d.index.to_string(), d.poly.to_string(), d.certified.to_string(), pi]);
    }
    let stats = moments(&values);
    report.set("delta", cp.density().to_string());
    report.set("c_r", cp.second_order().to_string());
    report.set("pi_k", pi_k);
    report.set_f64("mean", stats.mean);
    report.set_f64("variance", stats.variance);
    report.set_f64("std_error", stats.std_error);
    report.set_f64("leading_reference", leading);
    report.set_f64("reference", reference);
    report.set_f64("ratio", stats.mean / leading);
    report.set_f64("ratio_full", stats.mean / reference);
    report.elapsed = start.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::SampleSource;

    fn st(s: &str) -> SplittingType {
        s.parse().unwrap()
    }

    #[test]
    fn cubic_reference_mean() {
        let q = NumberField::rationals();
        let params = PrimeStatParams {
            ensemble: EnsembleParams::random(3, 50, 20, 3),
            r: st("0,0,1"),
            x: 7,
        };
        let r = run_indicator_moments(&q, &params).unwrap();
        for (qs, (refm, exact)) in r
            .column("q")
            .unwrap()
            .iter()
            .zip(r.column("ref_mean").unwrap().iter().zip(r.column("exact_mean").unwrap()))
        {
            let qv: f64 = qs.parse().unwrap();
            assert!((refm.parse::<f64>().unwrap() - 1.0 / 3.0).abs() < 1e-12);
            let expect = (qv.powi(3) - qv) / (3.0 * qv.powi(3));
            assert!((exact.parse::<f64>().unwrap() - expect).abs() < 1e-12);
        }
        for v in r.column("ref_variance").unwrap() {
            assert!(v.parse::<f64>().unwrap() > 0.0);
        }
    }

    #[test]
    fn exhaustive_mean_is_exact_share() {
        let q = NumberField::rationals();
        let r = st("2,0");
        let params = PrimeStatParams {
            ensemble: EnsembleParams {
                source: SampleSource::Exhaustive,
                condition_sn: false,
                ..EnsembleParams::random(2, 1, 0, 0)
            },
            r: r.clone(),
            x: 3,
        };
        let rep = run_indicator_moments(&q, &params).unwrap();
        // Oracle: x^2 + a1 x + a0 with a0, a1 in {-1,0,1} splits into two
        // distinct linear factors mod 3 iff its discriminant is a nonzero square.
        let mut hits = 0;
        for a0 in -1i64..=1 {
            for a1 in -1i64..=1 {
                let disc = (a1 * a1 - 4 * a0).rem_euclid(3);
                if disc == 1 {
                    hits += 1;
                }
            }
        }
        let row = rep.column("q").unwrap().iter().position(|q| *q == "3").unwrap();
        assert_eq!(rep.column("hits").unwrap()[row], hits.to_string());
        let mean: f64 = rep.column("mean").unwrap()[row].parse().unwrap();
        assert_eq!(mean, hits as f64 / 9.0);
    }

    #[test]
    fn wrong_degree_rejected() {
        let q = NumberField::rationals();
        let params = PrimeStatParams {
            ensemble: EnsembleParams::random(3, 50, 5, 3),
            r: st("0,1"),
            x: 100,
        };
        assert!(matches!(run_expectation_pi(&q, &params), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn tiny_x() {
        let q = NumberField::rationals();
        let params = PrimeStatParams {
            ensemble: EnsembleParams::random(3, 50, 40, 3),
            r: st("3,0,0"),
            x: 2,
        };
        let rep = run_expectation_pi(&q, &params).unwrap();
        for v in rep.column("pi_fr").unwrap() {
            assert!(v.is_empty() || v == "0" || v == "1");
        }
        assert!(!rep.warnings.is_empty());
    }
}
