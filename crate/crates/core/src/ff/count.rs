use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use crate::arith::{divisors, moebius, prime_power, Rational, RationalPoly};
use crate::error::{Error, Result};

/// Number of monic irreducible polynomials of degree `k` over `F_q`:
/// `(1/k) sum_{d | k} mu(d) q^(k/d)`.
pub fn count_irreducibles(q: u64, k: u32) -> Result<BigUint> {
    if prime_power(q).is_none() {
        return Err(Error::NotPrimePower(q.to_string()));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("degree must be >= 1".into()));
    }
    let q = BigInt::from(q);
    let mut total = BigInt::zero();
    for d in divisors(k as u64) {
        total += moebius(d) as i64 * q.pow(k / d as u32);
    }
    let count = total / BigInt::from(k);
    Ok(count.to_biguint().expect("irreducible counts are nonnegative"))
}

/// The same count as an exact polynomial in `q`.
pub fn irreducible_count_poly(k: u32) -> RationalPoly {
    assert!(k >= 1);
    let mut coeffs = vec![Rational::zero(); k as usize + 1];
    for d in divisors(k as u64) {
        let mu = moebius(d);
        coeffs[(k as u64 / d) as usize] += Rational::new(mu.into(), BigInt::from(k));
    }
    RationalPoly::from_coeffs(coeffs)
}

/// `count_irreducibles` as a `u64`, when it fits.
pub fn count_irreducibles_u64(q: u64, k: u32) -> Option<u64> {
    count_irreducibles(q, k).ok()?.to_u64()
}

#[cfg(test)]
mod tests {
    use super::super::factor::is_irreducible;
    use super::super::field::{ExtensionField, Field};
    use super::super::poly::PolyRing;
    use super::*;

    fn brute_force(q: u64, k: u32) -> u64 {
        let (p, f) = prime_power(q).unwrap();
        let field = ExtensionField::new(p, f as usize).unwrap();
        let ring = PolyRing::new(&field);
        let total = q.pow(k);
        (0..total)
            .filter(|&idx| {
                let mut i = idx;
                let mut coeffs: Vec<_> = (0..k)
                    .map(|_| {
                        let c = field.element(i % q);
                        i /= q;
                        c
                    })
                    .collect();
                coeffs.push(field.one());
                is_irreducible(&field, &ring.poly(coeffs))
            })
            .count() as u64
    }

    #[test]
    fn small_examples() {
        assert_eq!(count_irreducibles(7, 1).unwrap(), BigUint::from(7u32));
        assert_eq!(count_irreducibles(2, 2).unwrap(), BigUint::from(1u32));
        assert_eq!(count_irreducibles(2, 3).unwrap(), BigUint::from(2u32));
        assert!(count_irreducibles(6, 2).is_err());
    }

    #[test]
    fn matches_enumeration() {
        for q in [2u64, 3, 4, 5, 7, 9] {
            for k in 1..=5u32 {
                if q.pow(k) > 60_000 {
                    continue;
                }
                assert_eq!(
                    count_irreducibles_u64(q, k).unwrap(),
                    brute_force(q, k),
                    "q={q} k={k}"
                );
            }
        }
    }

    #[test]
    fn degree_weighted_sum_is_q_to_the_k() {
        for q in [2u64, 3, 4, 5, 7, 9] {
            for k in 1..=5u32 {
                let s: BigUint = divisors(k as u64)
                    .into_iter()
                    .map(|d| count_irreducibles(q, d as u32).unwrap() * d)
                    .sum();
                assert_eq!(s, BigUint::from(q).pow(k));
            }
        }
    }

    #[test]
    fn polynomial_form_agrees() {
        for k in 1..=6 {
            let poly = irreducible_count_poly(k);
            for q in [2u64, 3, 4, 5, 7, 8, 9, 11] {
                let v = poly.eval_integer(&BigInt::from(q));
                assert_eq!(v, Rational::from_integer(count_irreducibles(q, k).unwrap().into()));
            }
        }
    }
}
