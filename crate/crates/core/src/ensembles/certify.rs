use rayon::prelude::*;
use serde::Serialize;

use super::frobenius::{frobenius_type, FrobeniusOutcome};
use super::sample::{PolynomialSample, SampleSource};
use crate::error::Result;
use crate::nf::{NumberField, PrimeIdeal};
use crate::splitting_type::SplittingType;

/// Default number of primes scanned per certificate.
pub const DEFAULT_PRIME_BUDGET: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CertificateStatus {
    CertifiedSn,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub prime: PrimeIdeal,
    pub splitting_type: SplittingType,
}

/// One-sided proof that the Galois group of `f` over `K` is `S_n`:
/// Frobenius witnesses of an `n`-cycle (transitive), an `(n-1)`-cycle
/// (2-transitive, hence primitive) and a transposition (primitive plus a
/// transposition is `S_n`). For `n = 2` the `n`-cycle alone suffices; for
/// `n = 3` the `(n-1)`-cycle is the transposition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SnCertificate {
    pub status: CertificateStatus,
    pub witnesses: Vec<Witness>,
    /// Primes visited, skipped ones included.
    pub primes_examined: usize,
}

impl SnCertificate {
    pub fn is_certified(&self) -> bool {
        self.status == CertificateStatus::CertifiedSn
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Need {
    NCycle,
    NMinusOneCycle,
    Transposition,
}

fn needs(n: usize) -> Vec<Need> {
    match n {
        0 | 1 => vec![],
        2 => vec![Need::NCycle],
        3 => vec![Need::NCycle, Need::Transposition],
        _ => vec![Need::NCycle, Need::NMinusOneCycle, Need::Transposition],
    }
}

fn satisfies(r: &SplittingType, need: Need) -> bool {
    match need {
        Need::NCycle => r.is_n_cycle(),
        Need::NMinusOneCycle => r.is_n_minus_one_cycle(),
        Need::Transposition => r.is_transposition(),
    }
}

/// Scan primes of `K` by increasing norm, at most `prime_budget` of them,
/// for the witness types.
pub fn certify_sn(field: &NumberField, f: &PolynomialSample, prime_budget: usize) -> Result<SnCertificate> {
    let primes = field.first_primes(prime_budget)?;
    Ok(certify_sn_with_primes(f, &primes))
}

/// [`certify_sn`] over a precomputed prime list (the first primes in norm
/// order); the budget is the list length.
pub fn certify_sn_with_primes(f: &PolynomialSample, primes: &[PrimeIdeal]) -> SnCertificate {
    let mut open = needs(f.n());
    let mut witnesses = Vec::new();
    let mut examined = 0;
    for prime in primes {
        if open.is_empty() {
            break;
        }
        examined += 1;
        let FrobeniusOutcome::Type(r) = frobenius_type(f, prime) else {
            continue;
        };
        if let Some(pos) = open.iter().position(|&need| satisfies(&r, need)) {
            open.remove(pos);
            witnesses.push(Witness {
                prime: prime.clone(),
                splitting_type: r,
            });
        }
    }
    SnCertificate {
        status: if open.is_empty() {
            CertificateStatus::CertifiedSn
        } else {
            CertificateStatus::Unknown
        },
        witnesses,
        primes_examined: examined,
    }
}

/// Fraction of uncertified samples with its binomial standard error.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NonSnEstimate {
    pub samples: u64,
    pub unknown: u64,
    pub fraction: f64,
    pub std_error: f64,
}

/// Share of the ensemble whose certificate stays `Unknown` after
/// `prime_budget` primes. Samples are certified in parallel and counted in
/// index order.
pub fn non_sn_fraction(
    field: &NumberField,
    n: usize,
    bound: u64,
    source: &SampleSource,
    prime_budget: usize,
) -> Result<NonSnEstimate> {
    let total = source.len(field, n, bound)?;
    let primes = field.first_primes(prime_budget)?;
    let unknown = (0..total)
        .into_par_iter()
        .filter(|&i| {
            let f = source.get(field, n, bound, i);
            !certify_sn_with_primes(&f, &primes).is_certified()
        })
        .count() as u64;
    let fraction = if total == 0 { 0.0 } else { unknown as f64 / total as f64 };
    let std_error = if total == 0 {
        0.0
    } else {
        (fraction * (1.0 - fraction) / total as f64).sqrt()
    };
    Ok(NonSnEstimate {
        samples: total,
        unknown,
        fraction,
        std_error,
    })
}

#[cfg(test)]
mod tests {
    use super::super::sample::has_rational_root;
    use super::*;

    fn cert(text: &str, budget: usize) -> SnCertificate {
        let q = NumberField::rationals();
        certify_sn(&q, &PolynomialSample::parse(&q, text).unwrap(), budget).unwrap()
    }

    #[test]
    fn corpus() {
        let c = cert("x^3-x-1", 100);
        assert!(c.is_certified());
        assert_eq!(c.witnesses.len(), 2);
        assert!(cert("x^2+1", 10).is_certified());
        assert_eq!(cert("x^2+1", 10).witnesses[0].prime.p(), 3);
        for text in ["x^3-3x-1", "x^4+1", "x^4+3x^2+1", "x^6-x^2+5", "x^4-2"] {
            assert!(!cert(text, 500).is_certified(), "{text}");
        }
        assert!(cert("x^4-x-1", 200).is_certified());
        assert!(cert("x^5-x-1", 200).is_certified());
    }

    #[test]
    fn zero_budget_never_certifies() {
        let q = NumberField::rationals();
        let est = non_sn_fraction(&q, 3, 10, &SampleSource::Random { samples: 20, seed: 1 }, 0).unwrap();
        assert_eq!(est.fraction, 1.0);
    }

    #[test]
    fn quadratics_of_height_one() {
        let q = NumberField::rationals();
        let primes = q.first_primes(100).unwrap();
        let src = SampleSource::Exhaustive;
        for i in 0..src.len(&q, 2, 1).unwrap() {
            let f = src.get(&q, 2, 1, i);
            let certified = certify_sn_with_primes(&f, &primes).is_certified();
            let reducible = has_rational_root(&f.integer_coeffs().unwrap());
            assert_eq!(certified, !reducible, "{f}");
        }
    }

    #[test]
    fn deterministic_across_runs() {
        let q = NumberField::rationals();
        let src = SampleSource::Random { samples: 50, seed: 9 };
        let a = non_sn_fraction(&q, 3, 100, &src, 50).unwrap();
        let b = non_sn_fraction(&q, 3, 100, &src, 50).unwrap();
        assert_eq!(a, b);
    }
}
