use std::time::Instant;

use num_bigint::BigInt;
use serde_json::Value;

use super::{draw, f64_value, fmt_f64, note_conditioning, EnsembleParams, ExperimentReport};
use crate::ensembles::{congruent_mod, PolynomialSample};
use crate::error::{Error, Result};
use crate::ff::{is_irreducible, Field, PolyRing, PrimeField};
use crate::nf::NumberField;

/// Parameters of the residue-equidistribution experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Lemma11Params {
    pub ensemble: EnsembleParams,
    /// Rational primes; every prime of `K` above each is tested.
    pub primes: Vec<u64>,
    /// Residue target `g`; defaults to the first monic irreducible of
    /// degree `n` over `F_p`.
    pub target: Option<PolynomialSample>,
}

/// Smallest monic irreducible of degree `n` over `F_p` in base-`p` digit
/// order of its lower coefficients, lifted to `[0, p)`.
pub(crate) fn first_irreducible(field: &NumberField, p: u64, n: usize) -> Result<PolynomialSample> {
    let fp = PrimeField::new(p)?;
    let ring = PolyRing::new(&fp);
    let total = p
        .checked_pow(n as u32)
        .ok_or_else(|| Error::InvalidParameter(format!("{p}^{n} residue polynomials overflow")))?;
    for index in 0..total {
        let mut i = index;
        let digits: Vec<u64> = (0..n)
            .map(|_| {
                let d = i % p;
                i /= p;
                d
            })
            .collect();
        let mut c: Vec<_> = digits.iter().map(|&d| fp.element(d)).collect();
        c.push(fp.one());
        if is_irreducible(&fp, &ring.poly(c)) {
            return PolynomialSample::fixed(digits.into_iter().map(|d| field.integer(BigInt::from(d))).collect());
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Empirical `P(f = g mod P)` against `1/q^n`, one row per prime.
pub fn run_lemma11(field: &NumberField, params: &Lemma11Params) -> Result<ExperimentReport> {
    let start = Instant::now();
    let ens = &params.ensemble;
    if ens.n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if let Some(g) = &params.target {
        if g.n() != ens.n {
            return Err(Error::InvalidParameter(format!("target has degree {}, expected {}", g.n(), ens.n)));
        }
    }
    let mut json = ens.to_json(field);
    json.insert("primes".into(), params.primes.clone().into());
    json.insert(
        "target".into(),
        params.target.as_ref().map(|g| Value::from(g.to_string())).unwrap_or(Value::Null),
    );
    let mut report = ExperimentReport::new(
        "lemma11",
        Value::Object(json),
        &[
            "prime", "p", "q", "target", "samples", "hits", "frequency", "reference", "std_error", "z_score",
            "in_range",
        ],
    );

    let drawn = draw(field, ens)?;
    let used: Vec<&PolynomialSample> = drawn.iter().filter(|d| d.certified).map(|d| &d.poly).collect();
    let m = note_conditioning(&mut report, &drawn);

    let d = field.degree() as f64;
    let guard = (ens.height as f64).powf(d * ens.xi / ens.n as f64);
    report.set_f64("range_guard", guard);
    let mut max_z: f64 = 0.0;
    for &p in &params.primes {
        for prime in field.primes_above(p)?.iter() {
            let q = prime
                .norm_u64()
                .ok_or_else(|| Error::InvalidParameter(format!("norm of {prime} overflows")))?;
            let g = match &params.target {
                Some(g) => g.clone(),
                None => first_irreducible(field, p, ens.n)?,
            };
            let hits = used.iter().filter(|f| congruent_mod(f, &g, prime)).count();
            let reference = (q as f64).powi(ens.n as i32).recip();
            let frequency = hits as f64 / m as f64;
            let std_error = (reference * (1.0 - reference) / m as f64).sqrt();
            let z = (frequency - reference) / std_error;
            let in_range = (q as f64) < guard;
            if !in_range {
                report
                    .warnings
                    .push(format!("prime {prime}: q = {q} is outside the range q < N^(d*xi/n) = {guard:.4}"));
            }
            if m > 0 && (m as f64) < 10.0 * (q as f64).powi(ens.n as i32) {
                report
                    .warnings
                    .push(format!("prime {prime}: {m} samples is fewer than 10 q^n; the estimate is coarse"));
            }
            if z.is_finite() {
                max_z = max_z.max(z.abs());
            }
            report.push_row(vec![
                prime.label(),
                p.to_string(),
                q.to_string(),
                g.to_string(),
                m.to_string(),
                hits.to_string(),
                fmt_f64(frequency),
                fmt_f64(reference),
                fmt_f64(std_error),
                fmt_f64(z),
                in_range.to_string(),
            ]);
        }
    }
    report.summary.insert("max_abs_z".into(), f64_value(max_z));
    report.set("primes_tested", report.rows.len());
    report.elapsed = start.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::SampleSource;

    fn exhaustive(n: usize, height: u64) -> EnsembleParams {
        EnsembleParams {
            source: SampleSource::Exhaustive,
            condition_sn: false,
            ..EnsembleParams::random(n, height, 0, 0)
        }
    }

    #[test]
    fn default_target() {
        let q = NumberField::rationals();
        assert_eq!(first_irreducible(&q, 2, 2).unwrap().to_string(), "[1,1]");
        assert_eq!(first_irreducible(&q, 3, 1).unwrap().to_string(), "[0]");
    }

    #[test]
    fn exhaustive_counts_match_enumeration() {
        let q = NumberField::rationals();
        let params = Lemma11Params {
            ensemble: exhaustive(2, 1),
            primes: vec![2, 3],
            target: None,
        };
        let r = run_lemma11(&q, &params).unwrap();
        // Oracle: reduce each of the 9 polynomials by hand.
        let mut expect = Vec::new();
        for (p, g) in [(2i64, [1i64, 1]), (3, [1, 0])] {
            let mut hits = 0;
            for a0 in -1..=1i64 {
                for a1 in -1..=1i64 {
                    if (a0 - g[0]).rem_euclid(p) == 0 && (a1 - g[1]).rem_euclid(p) == 0 {
                        hits += 1;
                    }
                }
            }
            expect.push(hits.to_string());
        }
        assert_eq!(r.column("hits").unwrap(), expect);
        assert_eq!(r.column("samples").unwrap(), ["9", "9"]);
    }

    #[test]
    fn frequency_near_reference() {
        let q = NumberField::rationals();
        let params = Lemma11Params {
            ensemble: EnsembleParams::random(2, 1000, 4000, 5),
            primes: vec![2],
            target: None,
        };
        let r = run_lemma11(&q, &params).unwrap();
        let f: f64 = r.column("frequency").unwrap()[0].parse().unwrap();
        assert!((f - 0.25).abs() < 0.03, "{f}");
    }

    #[test]
    fn empty_run() {
        let q = NumberField::rationals();
        let params = Lemma11Params {
            ensemble: EnsembleParams::random(3, 100, 0, 1),
            primes: vec![2],
            target: None,
        };
        let r = run_lemma11(&q, &params).unwrap();
        assert_eq!(r.column("samples").unwrap(), ["0"]);
        assert_eq!(r.column("frequency").unwrap(), ["nan"]);
    }

    #[test]
    fn warns_outside_range() {
        let q = NumberField::rationals();
        let params = Lemma11Params {
            ensemble: EnsembleParams::random(3, 100, 10, 1),
            primes: vec![7],
            target: None,
        };
        let r = run_lemma11(&q, &params).unwrap();
        assert!(r.warnings.iter().any(|w| w.contains("outside the range")));
        assert_eq!(r.column("in_range").unwrap(), ["false"]);
    }
}
