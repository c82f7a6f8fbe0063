use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::{draw, f64_value, fmt_f64, moments, note_conditioning, EnsembleParams, ExperimentReport};
use crate::ensembles::PolynomialSample;
use crate::error::{Error, Result};
use crate::nf::{ideal_factorization, EnumerationMode, FieldElement, LcmAccumulator, NumberField, PrimeIdeal};

const CHUNK: usize = 256;

/// Exponent of one prime in the product of the values (`alpha`) and in
/// their lcm (`beta`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeExponents {
    pub prime: PrimeIdeal,
    pub alpha: u64,
    pub beta: u32,
}

/// `Psi_f(M)` with the data behind it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsiValue {
    /// `log N(lcm f(lambda))`.
    pub psi: f64,
    /// `sum log |N f(lambda)|`.
    pub log_p: f64,
    /// `|Lambda(M)|`, zero values included.
    pub lambda_count: usize,
    /// Values `f(lambda) = 0` left out.
    pub skipped_zero: usize,
    pub histogram: Vec<PrimeExponents>,
    #[serde(skip)]
    pub accumulator: LcmAccumulator,
}

/// `ln |n|` for integers of any size.
fn ln_abs(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        n.abs().to_f64().map_or(f64::NAN, f64::ln)
    } else {
        let shift = bits - 900;
        ln_abs(&(n.abs() >> shift)) + shift as f64 * std::f64::consts::LN_2
    }
}

struct Partial {
    acc: LcmAccumulator,
    alpha: BTreeMap<PrimeIdeal, u64>,
    log_p: f64,
    skipped: usize,
}

fn psi_chunk(field: &NumberField, f: &PolynomialSample, lambdas: &[FieldElement]) -> Result<Partial> {
    let mut part = Partial {
        acc: LcmAccumulator::new(),
        alpha: BTreeMap::new(),
        log_p: 0.0,
        skipped: 0,
    };
    for lambda in lambdas {
        let value = f.eval(field, lambda);
        if value.is_zero() {
            part.skipped += 1;
            continue;
        }
        let factors = ideal_factorization(field, &value).map_err(|e| Error::AtElement {
            lambda: lambda.to_string(),
            source: Box::new(e),
        })?;
        for (prime, v) in &factors {
            *part.alpha.entry(prime.clone()).or_default() += u64::from(*v);
        }
        part.acc.accumulate_factorization(&factors);
        part.log_p += ln_abs(&field.norm(&value));
    }
    Ok(part)
}

/// `Psi` over a given list of `lambda`. Chunks are fixed-size and merged in
/// order, so the floating-point sums do not depend on the worker count.
pub(crate) fn psi_over(field: &NumberField, f: &PolynomialSample, lambdas: &[FieldElement]) -> Result<PsiValue> {
    let parts = lambdas
        .par_chunks(CHUNK)
        .map(|chunk| psi_chunk(field, f, chunk))
        .collect::<Result<Vec<_>>>()?;
    let mut acc = LcmAccumulator::new();
    let mut alpha: BTreeMap<PrimeIdeal, u64> = BTreeMap::new();
    let mut log_p = 0.0;
    let mut skipped = 0;
    for part in parts {
        acc.merge(&part.acc);
        for (prime, a) in part.alpha {
            *alpha.entry(prime).or_default() += a;
        }
        log_p += part.log_p;
        skipped += part.skipped;
    }
    let histogram = alpha
        .into_iter()
        .map(|(prime, alpha)| {
            let beta = acc.exponent(&prime);
            PrimeExponents { prime, alpha, beta }
        })
        .collect();
    Ok(PsiValue {
        psi: acc.log_norm(),
        log_p,
        lambda_count: lambdas.len(),
        skipped_zero: skipped,
        histogram,
        accumulator: acc,
    })
}

/// `Psi_f(M) = log |N lcm(f(lambda) : N lambda <= M)|` with `lambda` from
/// [`NumberField::elements_up_to_norm`] in the given mode.
pub fn compute_psi(field: &NumberField, f: &PolynomialSample, m: u64, mode: EnumerationMode) -> Result<PsiValue> {
    let lambdas = field.elements_up_to_norm(m, mode)?;
    psi_over(field, f, &lambdas)
}

/// Ensemble and the list of norm bounds `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiEnsembleParams {
    pub ensemble: EnsembleParams,
    pub ms: Vec<u64>,
    pub mode: EnumerationMode,
}

/// Mean and variance of `Psi` over certified samples for each `M`, against
/// `(n-1) |Lambda(M)| log M`. The same samples are reused for every `M`.
pub fn run_psi_ensemble(field: &NumberField, params: &PsiEnsembleParams) -> Result<ExperimentReport> {
    let start = Instant::now();
    let ens = &params.ensemble;
    if ens.n == 1 {
        return Err(Error::LinearCase("psi-ensemble"));
    }
    if ens.n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let mut ms = params.ms.clone();
    ms.sort_unstable();
    ms.dedup();
    if ms.is_empty() || ms[0] < 2 {
        return Err(Error::InvalidParameter("need at least one M >= 2".into()));
    }
    let mut json = ens.to_json(field);
    json.insert("M".into(), ms.clone().into());
    json.insert("enumeration".into(), params.mode.to_string().into());
    let mut report = ExperimentReport::new(
        "psi-ensemble",
        Value::Object(json),
        &["M", "sample", "poly", "certified", "psi", "log_p", "lambda_count", "skipped_zero"],
    );
    if ens.n == 2 {
        report
            .warnings
            .push("n = 2 lies outside the n >= 3 range of the asymptotic; reported for comparison only".into());
    }
    let nf = ens.height as f64;
    for &m in &ms {
        let mf = m as f64;
        let upper = mf * mf.ln() / mf.ln().ln();
        if nf < mf || nf > upper {
            report.warnings.push(format!(
                "N = {} is outside the window M <= N <= M log M / log log M = {upper:.1} for M = {m}",
                ens.height
            ));
        }
    }

    let drawn = draw(field, ens)?;
    note_conditioning(&mut report, &drawn);
    let mut per_m = Vec::new();
    let mut ratios = Vec::new();
    let mut spreads = Vec::new();
    for &m in &ms {
        let lambdas = field.elements_up_to_norm(m, params.mode)?;
        let values = drawn
            .par_iter()
            .map(|d| d.certified.then(|| psi_over(field, &d.poly, &lambdas)).transpose())
            .collect::<Result<Vec<_>>>()?;
        let mut psis = Vec::new();
        for (d, v) in drawn.iter().zip(&values) {
            let (psi, log_p, skipped) = match v {
                Some(v) => {
                    psis.push(v.psi);
                    (fmt_f64(v.psi), fmt_f64(v.log_p), v.skipped_zero.to_string())
                }
                None => Default::default(),
            };
            report.push_row(vec![
                m.to_string(),
                d.index.to_string(),
                d.poly.to_string(),
                d.certified.to_string(),
                psi,
                log_p,
                lambdas.len().to_string(),
                skipped,
            ]);
        }
        let stats = moments(&psis);
        let reference = (ens.n - 1) as f64 * lambdas.len() as f64 * (m as f64).ln();
        let ratio = stats.mean / reference;
        let rel_spread = stats.variance.sqrt() / stats.mean;
        ratios.push(ratio);
        spreads.push(rel_spread);
        per_m.push(json!({
            "M": m,
            "lambda_count": lambdas.len(),
            "samples": stats.count,
            "mean": f64_value(stats.mean),
            "variance": f64_value(stats.variance),
            "std_error": f64_value(stats.std_error),
            "reference": f64_value(reference),
            "ratio": f64_value(ratio),
            "rel_spread": f64_value(rel_spread),
        }));
        if m == *ms.last().unwrap() {
            report.set_f64("mean", stats.mean);
            report.set_f64("variance", stats.variance);
            report.set_f64("std_error", stats.std_error);
            report.set_f64("reference", reference);
            report.set_f64("ratio", ratio);
            report.set_f64("rel_spread", rel_spread);
        }
    }
    let approaching = ratios.windows(2).all(|w| (w[1] - 1.0).abs() < (w[0] - 1.0).abs());
    let spread_falling = spreads.windows(2).all(|w| w[1] < w[0]);
    report.set("per_m", Value::Array(per_m));
    report.set("ratio_approaching_one", approaching);
    report.set("rel_spread_decreasing", spread_falling);
    report.elapsed = start.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::SampleSource;
    use num_bigint::BigUint;
    use num_integer::Integer;

    fn q_psi(text: &str, m: u64) -> PsiValue {
        let q = NumberField::rationals();
        compute_psi(&q, &PolynomialSample::parse(&q, text).unwrap(), m, EnumerationMode::UnitOrbits).unwrap()
    }

    #[test]
    fn examples() {
        let v = q_psi("x", 10);
        assert!((v.psi - 2520f64.ln()).abs() < 1e-12);
        assert_eq!(v.accumulator.norm(), BigUint::from(2520u32));
        let v = q_psi("x^2", 10);
        assert_eq!(v.accumulator.norm(), BigUint::from(2520u32 * 2520));
        // lcm(2, 5, 10, 17, 26) = 2 * 5 * 13 * 17
        let v = q_psi("x^2+1", 5);
        let direct = [2u32, 5, 10, 17, 26].iter().fold(1u32, |l, &v| l.lcm(&v));
        assert_eq!(direct, 2210);
        assert_eq!(v.accumulator.norm(), BigUint::from(direct));
        assert!(v.psi <= v.log_p);
        assert_eq!(v.lambda_count, 5);
    }

    #[test]
    fn zero_values_skipped() {
        let v = q_psi("x^2-4", 6);
        assert_eq!(v.skipped_zero, 1);
        // lcm(-3, 5, 12, 21, 32)
        assert_eq!(v.accumulator.norm(), BigUint::from(3360u32));
    }

    #[test]
    fn histogram_dominates_lcm() {
        let v = q_psi("x^3-x-1", 300);
        for h in &v.histogram {
            assert!(h.alpha >= u64::from(h.beta));
            assert!(h.beta > 0);
        }
        assert!(v.psi <= v.log_p + 1e-9);
    }

    #[test]
    fn gaussian_psi_matches_integer_norm_lcm() {
        // Over Z[i] with f = x, the lcm of all lambda of norm <= M up to
        // units has norm prod over primes P of N(P)^max v_P.
        let k = NumberField::parse("x^2+1").unwrap();
        let f = PolynomialSample::parse(&k, "[0]").unwrap();
        let v = compute_psi(&k, &f, 10, EnumerationMode::UnitOrbits).unwrap();
        // Norms of prime powers <= 10: 2,4,8 (1+i)^k; 5 twice (2+-i), 9 (3).
        let expect = BigUint::from(8u32 * 5 * 5 * 9);
        assert_eq!(v.accumulator.norm(), expect);
    }

    #[test]
    fn integer_lcm_oracle() {
        let q = NumberField::rationals();
        for text in ["x^3+2x-7", "x^3-5x^2+x+3", "x^2+x+41"] {
            let f = PolynomialSample::parse(&q, text).unwrap();
            let coeffs = f.integer_coeffs().unwrap();
            let mut l = BigInt::from(1);
            for lam in 1..=200i64 {
                let val = coeffs.iter().rev().fold(BigInt::from(0), |a, c| a * lam + c);
                if val != BigInt::from(0) {
                    l = l.lcm(&val);
                }
            }
            let v = compute_psi(&q, &f, 200, EnumerationMode::UnitOrbits).unwrap();
            assert_eq!(BigInt::from(v.accumulator.norm()), l.abs(), "{text}");
        }
    }

    #[test]
    fn linear_rejected() {
        let q = NumberField::rationals();
        let params = PsiEnsembleParams {
            ensemble: EnsembleParams::random(1, 10, 3, 1),
            ms: vec![10],
            mode: EnumerationMode::UnitOrbits,
        };
        assert!(matches!(run_psi_ensemble(&q, &params), Err(Error::LinearCase(_))));
    }

    #[test]
    fn fixed_sample_matches_compute_psi() {
        let q = NumberField::rationals();
        let f = PolynomialSample::parse(&q, "x^3-x-1").unwrap();
        let params = PsiEnsembleParams {
            ensemble: EnsembleParams {
                source: SampleSource::Fixed { poly: f.clone() },
                ..EnsembleParams::random(3, 1, 1, 0)
            },
            ms: vec![100],
            mode: EnumerationMode::UnitOrbits,
        };
        let rep = run_psi_ensemble(&q, &params).unwrap();
        let direct = compute_psi(&q, &f, 100, EnumerationMode::UnitOrbits).unwrap();
        assert_eq!(rep.summary_f64("mean").unwrap(), direct.psi);
        assert_eq!(rep.column("psi").unwrap(), [fmt_f64(direct.psi)]);
    }

    #[test]
    fn ensemble_is_reproducible() {
        let q = NumberField::rationals();
        let params = PsiEnsembleParams {
            ensemble: EnsembleParams::random(3, 60, 6, 11),
            ms: vec![60, 30],
            mode: EnumerationMode::UnitOrbits,
        };
        let a = run_psi_ensemble(&q, &params).unwrap();
        let b = run_psi_ensemble(&q, &params).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        assert_eq!(a.column("M").unwrap()[0], "30");
    }
}
