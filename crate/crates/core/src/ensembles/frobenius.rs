use std::fmt;

use serde::{Serialize, Serializer};

use super::sample::PolynomialSample;
use crate::error::Result;
use crate::ff::{count_distinct_roots, splitting_type, ExtensionField, Field, FqPoly, PolyRing, PrimeField};
use crate::nf::{NumberField, PrimeIdeal, ResidueField};
use crate::splitting_type::SplittingType;

/// Frobenius data of `f` at a prime.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FrobeniusOutcome {
    /// `f mod P` is squarefree; its factorization pattern.
    Type(SplittingType),
    /// `P` is ramified in `K` or `f mod P` has a repeated factor.
    Ramified,
}

impl FrobeniusOutcome {
    pub fn splitting_type(&self) -> Option<&SplittingType> {
        match self {
            FrobeniusOutcome::Type(r) => Some(r),
            FrobeniusOutcome::Ramified => None,
        }
    }
}

impl fmt::Display for FrobeniusOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrobeniusOutcome::Type(r) => write!(f, "{r}"),
            FrobeniusOutcome::Ramified => write!(f, "ramified"),
        }
    }
}

impl Serialize for FrobeniusOutcome {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `f mod P` together with the residue field it lives over.
enum Reduced {
    Prime(PrimeField, FqPoly<u64>),
    Extension(ExtensionField, FqPoly<Vec<u64>>),
}

fn reduce(f: &PolynomialSample, prime: &PrimeIdeal) -> Reduced {
    let rf = prime.residue_field();
    match &rf {
        ResidueField::Prime { field, .. } => {
            let mut c: Vec<u64> = f.coeffs().iter().map(|a| rf.reduce_prime(a)).collect();
            c.push(1);
            Reduced::Prime(*field, PolyRing::new(field).poly(c))
        }
        ResidueField::Extension(field) => {
            let mut c: Vec<Vec<u64>> = f.coeffs().iter().map(|a| rf.reduce_extension(a)).collect();
            c.push(field.one());
            let poly = PolyRing::new(field).poly(c);
            Reduced::Extension(field.clone(), poly)
        }
    }
}

/// Splitting type of `f mod P`, or `Ramified` when `e_P > 1` or the
/// reduction is not squarefree.
pub fn frobenius_type(f: &PolynomialSample, prime: &PrimeIdeal) -> FrobeniusOutcome {
    if prime.ramification() > 1 {
        return FrobeniusOutcome::Ramified;
    }
    let r = match reduce(f, prime) {
        Reduced::Prime(k, poly) => splitting_type(&k, &poly),
        Reduced::Extension(k, poly) => splitting_type(&k, &poly),
    };
    match r {
        Some(r) => FrobeniusOutcome::Type(r),
        None => FrobeniusOutcome::Ramified,
    }
}

/// Number of distinct roots of `f mod P` in `O_K/P`.
pub fn s_wp(f: &PolynomialSample, prime: &PrimeIdeal) -> usize {
    match reduce(f, prime) {
        Reduced::Prime(k, poly) => count_distinct_roots(&k, &poly),
        Reduced::Extension(k, poly) => count_distinct_roots(&k, &poly),
    }
}

/// Whether `f` and `g` agree modulo `P` coefficientwise.
pub fn congruent_mod(f: &PolynomialSample, g: &PolynomialSample, prime: &PrimeIdeal) -> bool {
    let rf = prime.residue_field();
    f.n() == g.n()
        && f
            .coeffs()
            .iter()
            .zip(g.coeffs())
            .all(|(a, b)| rf.reduce(&a.sub(b)).is_zero())
}

/// `pi_{f,r}(x)`: primes of norm at most `x` where `f` is unramified with
/// splitting type `r`.
pub fn pi_fr(field: &NumberField, f: &PolynomialSample, r: &SplittingType, x: u64) -> Result<usize> {
    Ok(field
        .primes_up_to(x)?
        .iter()
        .filter(|q| frobenius_type(f, q).splitting_type() == Some(r))
        .count())
}
