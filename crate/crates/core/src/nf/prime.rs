use std::fmt;

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

use super::field::{mod_u64, FieldElement, NumberField};
use crate::arith::{format_int_poly, primes_up_to as rational_primes_up_to};
use crate::error::Result;
use crate::ff::{ExtensionField, Field, PrimeField};

/// A prime `P | p` of a monogenic field, `P = (p, h(theta))` with `h` the
/// monic irreducible local factor of `g mod p`.
///
/// The derived order (p, then degree of `h`, then coefficients of `h` from
/// the constant term up) is the canonical order used for all output.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimeIdeal {
    p: u64,
    residue_degree: u32,
    local_factor: Vec<u64>,
    ramification: u32,
}

impl PrimeIdeal {
    pub(crate) fn new(p: u64, local_factor: Vec<u64>, ramification: u32) -> Self {
        debug_assert_eq!(local_factor.last(), Some(&1));
        PrimeIdeal {
            p,
            residue_degree: (local_factor.len() - 1) as u32,
            local_factor,
            ramification,
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// `f_P`.
    pub fn residue_degree(&self) -> u32 {
        self.residue_degree
    }

    /// `e_P`.
    pub fn ramification(&self) -> u32 {
        self.ramification
    }

    pub fn local_factor(&self) -> &[u64] {
        &self.local_factor
    }

    /// `q_P = p^f`.
    pub fn norm(&self) -> BigUint {
        BigUint::from(self.p).pow(self.residue_degree)
    }

    pub fn norm_u64(&self) -> Option<u64> {
        self.p.checked_pow(self.residue_degree)
    }

    /// `e = f = 1`.
    pub fn is_degree_one_unramified(&self) -> bool {
        self.ramification == 1 && self.residue_degree == 1
    }

    /// The residue field `O_K/P = F_p[t]/(h)`.
    pub fn residue_field(&self) -> ResidueField {
        let base = PrimeField::new(self.p).expect("prime ideal over a prime");
        if self.residue_degree == 1 {
            let root = base.neg(&self.local_factor[0]);
            ResidueField::Prime { field: base, root }
        } else {
            ResidueField::Extension(ExtensionField::from_irreducible(base, self.local_factor.clone()))
        }
    }

    /// Image of `e` in `O_K/P`, with `theta` sent to `t`.
    pub fn reduce(&self, e: &FieldElement) -> Residue {
        self.residue_field().reduce(e)
    }

    /// Short label for tables, e.g. `5:x + 3`.
    pub fn label(&self) -> String {
        let h: Vec<BigInt> = self.local_factor.iter().map(|&c| BigInt::from(c)).collect();
        format!("{}:{}", self.p, format_int_poly(&h))
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// `O_K/P` in the representation used by the finite-field module.
#[derive(Debug, Clone)]
pub enum ResidueField {
    /// `f = 1`: `F_p` with `theta` mapped to `root`.
    Prime { field: PrimeField, root: u64 },
    Extension(ExtensionField),
}

/// An element of a [`ResidueField`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Residue {
    Prime(u64),
    Extension(Vec<u64>),
}

impl Residue {
    pub fn is_zero(&self) -> bool {
        match self {
            Residue::Prime(v) => *v == 0,
            Residue::Extension(v) => v.iter().all(|&c| c == 0),
        }
    }
}

impl ResidueField {
    pub fn p(&self) -> u64 {
        match self {
            ResidueField::Prime { field, .. } => field.p(),
            ResidueField::Extension(k) => k.characteristic(),
        }
    }

    pub fn reduce(&self, e: &FieldElement) -> Residue {
        match self {
            ResidueField::Prime { .. } => Residue::Prime(self.reduce_prime(e)),
            ResidueField::Extension(_) => Residue::Extension(self.reduce_extension(e)),
        }
    }

    /// Panics on an extension residue field.
    pub fn reduce_prime(&self, e: &FieldElement) -> u64 {
        let ResidueField::Prime { field, root } = self else {
            panic!("reduce_prime on an extension residue field")
        };
        let p = field.p();
        e.coords()
            .iter()
            .rev()
            .fold(0u64, |acc, c| field.add(&field.mul(&acc, root), &mod_u64(c, p)))
    }

    /// Panics on a prime residue field.
    pub fn reduce_extension(&self, e: &FieldElement) -> Vec<u64> {
        let ResidueField::Extension(k) = self else {
            panic!("reduce_extension on a prime residue field")
        };
        let p = k.characteristic();
        let v: Vec<u64> = e.coords().iter().map(|c| mod_u64(c, p)).collect();
        k.reduce(&v)
    }
}

impl NumberField {
    /// All primes of norm at most `x`, sorted by norm then canonically.
    pub fn primes_up_to(&self, x: u64) -> Result<Vec<PrimeIdeal>> {
        let mut out = Vec::new();
        if x < 2 {
            return Ok(out);
        }
        for p in rational_primes_up_to(x) {
            for ideal in self.primes_above(p)?.iter() {
                if ideal.norm_u64().is_some_and(|q| q <= x) {
                    out.push(ideal.clone());
                }
            }
        }
        out.sort_by(|a, b| a.norm_u64().cmp(&b.norm_u64()).then_with(|| a.cmp(b)));
        Ok(out)
    }

    /// `pi_K(x)`.
    pub fn prime_count(&self, x: u64) -> Result<usize> {
        Ok(self.primes_up_to(x)?.len())
    }

    /// The first `count` primes in norm order.
    pub fn first_primes(&self, count: usize) -> Result<Vec<PrimeIdeal>> {
        let mut bound = 16u64.max(4 * count as u64);
        loop {
            let mut v = self.primes_up_to(bound)?;
            if v.len() >= count {
                v.truncate(count);
                return Ok(v);
            }
            bound *= 2;
        }
    }

    /// `(e, f, local factor)` data of every prime above every rational
    /// prime in `[from, to]`.
    pub fn decomposition_table(&self, from: u64, to: u64) -> Result<Vec<PrimeIdeal>> {
        let mut out = Vec::new();
        for p in rational_primes_up_to(to) {
            if p >= from {
                out.extend(self.primes_above(p)?.iter().cloned());
            }
        }
        Ok(out)
    }
}
