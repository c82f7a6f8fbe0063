use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use super::field::{FieldElement, NumberField};
use super::prime::PrimeIdeal;
use super::valuation::ideal_factorization;
use crate::error::{Error, Result};

/// The lcm of a family of principal ideals, kept as `P -> max exponent`.
///
/// Merging is a pointwise maximum, so accumulators built on disjoint shards
/// combine to the same value in any order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LcmAccumulator {
    exponents: BTreeMap<PrimeIdeal, u32>,
    count: u64,
}

impl LcmAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Fold in the ideal `e O_K`; `e` must be nonzero.
    pub fn accumulate(&mut self, field: &NumberField, e: &FieldElement) -> Result<()> {
        if e.is_zero() {
            return Err(Error::InvalidParameter("cannot accumulate the zero ideal".into()));
        }
        let factors = ideal_factorization(field, e)?;
        self.accumulate_factorization(&factors);
        Ok(())
    }

    /// Fold in an already factored ideal.
    pub fn accumulate_factorization(&mut self, factors: &[(PrimeIdeal, u32)]) {
        for (prime, v) in factors {
            self.include(prime, *v);
        }
        self.count += 1;
    }

    fn include(&mut self, prime: &PrimeIdeal, v: u32) {
        if v == 0 {
            return;
        }
        match self.exponents.get_mut(prime) {
            Some(m) => *m = (*m).max(v),
            None => {
                self.exponents.insert(prime.clone(), v);
            }
        }
    }

    pub fn merge(&mut self, other: &LcmAccumulator) {
        for (prime, v) in &other.exponents {
            self.include(prime, *v);
        }
        self.count += other.count;
    }

    pub fn exponents(&self) -> &BTreeMap<PrimeIdeal, u32> {
        &self.exponents
    }

    pub fn exponent(&self, prime: &PrimeIdeal) -> u32 {
        self.exponents.get(prime).copied().unwrap_or(0)
    }

    /// Number of accumulated elements.
    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    /// `log N(lcm) = sum m f_P log p`.
    pub fn log_norm(&self) -> f64 {
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for (prime, m) in &self.exponents {
            let term = f64::from(*m) * f64::from(prime.residue_degree()) * (prime.p() as f64).ln();
            // Kahan summation keeps long sums within a few ulps
            let y = term - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        sum
    }

    /// Exact `N(lcm) = prod p^(m f_P)`.
    pub fn norm(&self) -> BigUint {
        let mut acc = BigUint::one();
        for (prime, m) in &self.exponents {
            acc *= BigUint::from(prime.p()).pow(m * prime.residue_degree());
        }
        acc
    }
}
