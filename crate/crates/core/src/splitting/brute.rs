use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::arith::prime_power;
use crate::error::{Error, Result};
use crate::ff::{splitting_type, ExtensionField, Field, PolyRing, PrimeField};
use crate::splitting_type::SplittingType;

/// Largest `q^n` the brute-force oracle will enumerate.
pub const BRUTE_FORCE_BUDGET: u64 = 10_000_000;

const SHARD: u64 = 4096;

/// Histogram of splitting types over all monic degree-`n` polynomials over
/// `F_q`; `non_squarefree` counts the rest.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BruteForceCensus {
    pub counts: BTreeMap<SplittingType, u64>,
    pub non_squarefree: u64,
}

impl BruteForceCensus {
    pub fn count(&self, r: &SplittingType) -> u64 {
        self.counts.get(r).copied().unwrap_or(0)
    }

    fn merge(mut self, other: Self) -> Self {
        for (r, c) in other.counts {
            *self.counts.entry(r).or_default() += c;
        }
        self.non_squarefree += other.non_squarefree;
        self
    }
}

/// Factor every monic degree-`n` polynomial over `F_q`. The enumeration is
/// sharded across the rayon pool; shard histograms are summed, so the result
/// does not depend on the worker count.
pub fn brute_force_census(n: usize, q: u64) -> Result<BruteForceCensus> {
    let (p, f) = prime_power(q).ok_or_else(|| Error::NotPrimePower(q.to_string()))?;
    let total = q
        .checked_pow(n as u32)
        .filter(|&t| t <= BRUTE_FORCE_BUDGET)
        .ok_or_else(|| Error::BudgetExceeded {
            size: format!("{q}^{n} polynomials"),
            budget: BRUTE_FORCE_BUDGET,
        })?;
    if f == 1 {
        Ok(census_over(&PrimeField::new(p)?, n, total))
    } else {
        Ok(census_over(&ExtensionField::new(p, f as usize)?, n, total))
    }
}

fn census_over<F: Field>(field: &F, n: usize, total: u64) -> BruteForceCensus {
    let q = field.order_u64().expect("small field");
    let shards = total.div_ceil(SHARD);
    (0..shards)
        .into_par_iter()
        .map(|s| {
            let ring = PolyRing::new(field);
            let mut local = BruteForceCensus::default();
            for idx in s * SHARD..((s + 1) * SHARD).min(total) {
                let mut i = idx;
                let mut coeffs = Vec::with_capacity(n + 1);
                for _ in 0..n {
                    coeffs.push(field.element(i % q));
                    i /= q;
                }
                coeffs.push(field.one());
                match splitting_type(field, &ring.poly(coeffs)) {
                    Some(r) => *local.counts.entry(r).or_default() += 1,
                    None => local.non_squarefree += 1,
                }
            }
            local
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(BruteForceCensus::default(), BruteForceCensus::merge)
}

/// Number of monic degree-`n` polynomials over `F_q` of splitting type `r`,
/// by exhaustive factorization; `q^n` must not exceed
/// [`BRUTE_FORCE_BUDGET`].
pub fn brute_force_count(r: &SplittingType, q: u64) -> Result<u64> {
    Ok(brute_force_census(r.degree(), q)?.count(r))
}
