//! Exact combinatorics of factorization types over `F_q`.
//!
//! The census polynomial `|X_{n,r}|(q) = prod_k C(A_{q,k}, r_k)` counts
//! monic squarefree degree-`n` polynomials of splitting type `r`, where
//! `A_{q,k}` is the number of monic irreducibles of degree `k`. Its leading
//! coefficient is the density `delta(r)` and its `q^(n-1)` coefficient the
//! second-order constant `C_r`.

mod brute;

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

pub use brute::{brute_force_census, brute_force_count, BruteForceCensus, BRUTE_FORCE_BUDGET};

use crate::arith::{poly_binomial, Rational, RationalPoly};
use crate::error::{Error, Result};
use crate::ff::irreducible_count_poly;
use crate::splitting_type::SplittingType;

/// All splitting types of degree `n`: partitions ordered by decreasing
/// largest part, then reverse-lexicographically (`4`, `3+1`, `2+2`,
/// `2+1+1`, `1+1+1+1`).
pub fn all_types(n: usize) -> Vec<SplittingType> {
    assert!(n >= 1, "degree must be >= 1");
    let mut out = Vec::new();
    let mut parts = vec![n];
    loop {
        out.push(SplittingType::from_partition(&parts).expect("partition of n"));
        // next partition in reverse-lex order
        let Some(pos) = parts.iter().rposition(|&x| x > 1) else {
            break;
        };
        let k = parts[pos] - 1;
        let mut rest: usize = parts[pos + 1..].iter().sum::<usize>() + 1;
        parts.truncate(pos);
        parts.push(k);
        while rest > 0 {
            let take = rest.min(k);
            parts.push(take);
            rest -= take;
        }
    }
    out
}

/// The census of one splitting type as an exact polynomial in `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusPolynomial {
    r: SplittingType,
    poly: RationalPoly,
}

impl CensusPolynomial {
    pub fn splitting_type(&self) -> &SplittingType {
        &self.r
    }

    pub fn n(&self) -> usize {
        self.r.degree()
    }

    pub fn poly(&self) -> &RationalPoly {
        &self.poly
    }

    /// `delta(r)`.
    pub fn density(&self) -> Rational {
        self.poly.leading()
    }

    /// The exact `q^(n-1)` coefficient.
    pub fn second_order(&self) -> Rational {
        self.poly.coeff(self.n() - 1)
    }

    /// Value at an integer `q`; a nonnegative integer at prime powers.
    pub fn eval(&self, q: u64) -> Rational {
        self.poly.eval_integer(&BigInt::from(q))
    }

    /// Value at a prime power as an integer.
    pub fn count(&self, q: u64) -> BigUint {
        let v = self.eval(q);
        assert!(v.is_integer(), "census value at q = {q} is not an integer");
        v.to_integer().to_biguint().expect("census values are nonnegative")
    }
}

impl fmt::Display for CensusPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

/// `|X_{n,r}|(q) = prod_k C(A_{q,k}, r_k)` expanded exactly.
pub fn census(r: &SplittingType) -> CensusPolynomial {
    let mut poly = RationalPoly::one();
    for k in 1..=r.degree() {
        let rk = r.count(k);
        if rk > 0 {
            poly = &poly * &poly_binomial(&irreducible_count_poly(k as u32), rk);
        }
    }
    CensusPolynomial { r: r.clone(), poly }
}

/// `delta(r)`, the leading census coefficient.
pub fn density(r: &SplittingType) -> Rational {
    census(r).density()
}

/// `delta(r)` from the class-size formula `prod_k 1 / (r_k! k^r_k)`.
pub fn density_from_class_size(r: &SplittingType) -> Rational {
    Rational::new(class_size(r).into(), factorial(r.degree() as u32).into())
}

/// Size of the conjugacy class of cycle type `r` in `S_n`:
/// `n! / prod_k (r_k! k^r_k)`.
pub fn class_size(r: &SplittingType) -> BigUint {
    let mut denom = BigUint::one();
    for k in 1..=r.degree() {
        let rk = r.count(k);
        denom *= factorial(rk) * BigUint::from(k).pow(rk);
    }
    factorial(r.degree() as u32) / denom
}

fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// The second-order constant of one type: the exact census coefficient and,
/// for comparison, the closed form `-delta C(r_2) (r_1+1)(r_1+2) / (2 r_1!)`
/// with `C(r_2)` the `q^(2 r_2 - 1)` coefficient of `C((q^2-q)/2, r_2)`
/// (taken as 0 when `r_2 = 0`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SecondOrderConstant {
    #[serde(serialize_with = "ser_rational")]
    pub exact: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub closed_form: Rational,
}

impl SecondOrderConstant {
    pub fn agrees(&self) -> bool {
        self.exact == self.closed_form
    }
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// `C_r` for `n >= 2`.
pub fn c_r(r: &SplittingType) -> Result<SecondOrderConstant> {
    if r.degree() < 2 {
        return Err(Error::InvalidParameter("C_r needs n >= 2".into()));
    }
    let exact = census(r).second_order();
    Ok(SecondOrderConstant {
        closed_form: closed_form_c_r(r),
        exact,
    })
}

fn closed_form_c_r(r: &SplittingType) -> Rational {
    let r1 = r.count(1);
    let r2 = r.count(2);
    let c_r2 = if r2 == 0 {
        Rational::zero()
    } else {
        poly_binomial(&irreducible_count_poly(2), r2).coeff(2 * r2 as usize - 1)
    };
    let r1b = BigInt::from(r1);
    let num = (&r1b + 1u32) * (&r1b + 2u32);
    let den = BigInt::from(2u32) * BigInt::from(factorial(r1));
    -density(r) * c_r2 * Rational::new(num, den)
}

/// `f64` view of a rational, for reports.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(s: &str) -> SplittingType {
        s.parse().unwrap()
    }

    fn rat(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    #[test]
    fn type_counts_and_order() {
        assert_eq!(all_types(2).len(), 2);
        assert_eq!(all_types(3).len(), 3);
        assert_eq!(all_types(5).len(), 7);
        assert_eq!(all_types(8).len(), 22);
        let parts: Vec<Vec<usize>> = all_types(4).iter().map(|r| r.parts()).collect();
        assert_eq!(parts, vec![vec![4], vec![3, 1], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]);
        assert_eq!(all_types(1), vec![st("1")]);
    }

    #[test]
    fn census_examples() {
        assert_eq!(census(&st("1")).poly(), &RationalPoly::q());
        let c = census(&st("2,0"));
        assert_eq!(c.poly().coeffs(), &[rat(0, 1), rat(-1, 2), rat(1, 2)]);
        let c = census(&st("1,1,0"));
        assert_eq!(c.poly().coeffs(), &[rat(0, 1), rat(0, 1), rat(-1, 2), rat(1, 2)]);
    }

    #[test]
    fn density_examples() {
        assert_eq!(density(&st("1,1,0")), rat(1, 2));
        assert_eq!(density(&st("0,0,1")), rat(1, 3));
        for n in 1..=6 {
            let mut v = vec![0u32; n];
            v[0] = n as u32;
            assert_eq!(density(&SplittingType::new(v).unwrap()), Rational::new(1.into(), factorial(n as u32).into()));
        }
    }

    #[test]
    fn c_r_examples() {
        assert_eq!(c_r(&st("2,0")).unwrap().exact, rat(-1, 2));
        assert_eq!(c_r(&st("0,1")).unwrap().exact, rat(-1, 2));
        assert_eq!(c_r(&st("0,0,1")).unwrap().exact, rat(0, 1));
        // the closed form disagrees already here
        let c = c_r(&st("0,1")).unwrap();
        assert_eq!(c.closed_form, rat(1, 4));
        assert!(!c.agrees());
        assert!(c_r(&st("1")).is_err());
    }

    #[test]
    fn identities_up_to_eight() {
        for n in 2..=8usize {
            let types = all_types(n);
            let total: RationalPoly = types.iter().map(|r| census(r).poly().clone()).sum();
            let expect = &RationalPoly::monomial(Rational::one(), n)
                - &RationalPoly::monomial(Rational::one(), n - 1);
            assert_eq!(total, expect, "n = {n}");
            let dsum: Rational = types.iter().map(density).sum();
            assert_eq!(dsum, Rational::one());
            let csum: Rational = types.iter().map(|r| c_r(r).unwrap().exact).sum();
            assert_eq!(csum, -Rational::one());
            for r in &types {
                let d = density(r) * Rational::from_integer(BigInt::from(factorial(n as u32)));
                assert!(d.is_integer());
                assert_eq!(d.to_integer(), BigInt::from(class_size(r)));
                assert_eq!(density(r), density_from_class_size(r));
            }
        }
    }

    /// Class sizes against a direct count of cycle types over all of S_n.
    #[test]
    fn class_sizes_match_permutation_count() {
        for n in 1..=8usize {
            let mut counts = std::collections::BTreeMap::<SplittingType, u64>::new();
            let mut perm: Vec<usize> = (0..n).collect();
            loop {
                let mut seen = vec![false; n];
                let mut lens = Vec::new();
                for s in 0..n {
                    if !seen[s] {
                        let mut len = 0;
                        let mut i = s;
                        while !seen[i] {
                            seen[i] = true;
                            i = perm[i];
                            len += 1;
                        }
                        lens.push(len);
                    }
                }
                *counts.entry(SplittingType::from_degrees(n, lens).unwrap()).or_default() += 1;
                if !next_permutation(&mut perm) {
                    break;
                }
            }
            for r in all_types(n) {
                assert_eq!(BigUint::from(counts[&r]), class_size(&r), "n={n} r={r}");
            }
        }
    }

    fn next_permutation(v: &mut [usize]) -> bool {
        let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
            return false;
        };
        let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
        v.swap(i - 1, j);
        v[i..].reverse();
        true
    }
}
