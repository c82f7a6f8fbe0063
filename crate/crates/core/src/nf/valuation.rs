use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::field::{FieldElement, NumberField};
use super::hnf::IdealHnf;
use super::prime::PrimeIdeal;
use crate::arith::{factor, p_adic_valuation};
use crate::error::Result;

/// `v_P(e)` for nonzero `e`: the Hensel fast path when `e_P = f_P = 1`,
/// the HNF containment search otherwise.
pub fn valuation(field: &NumberField, e: &FieldElement, prime: &PrimeIdeal) -> u32 {
    if prime.is_degree_one_unramified() {
        valuation_fast(field, e, prime)
    } else {
        valuation_hnf(field, e, prime)
    }
}

/// Fast path for degree-one unramified `P`: lift the simple root of
/// `g mod p` to `Z/p^k` and take the `p`-adic valuation of `e` evaluated
/// there, with `k` one more than `v_p(N(e))`.
pub fn valuation_fast(field: &NumberField, e: &FieldElement, prime: &PrimeIdeal) -> u32 {
    assert!(prime.is_degree_one_unramified(), "fast path needs e = f = 1");
    assert!(!e.is_zero(), "valuation of zero");
    let p = prime.p();
    let vn = p_adic_valuation(field.norm(e).magnitude(), p);
    if vn == 0 {
        return 0;
    }
    let k = vn + 1;
    let modulus = BigInt::from(p).pow(k);
    let root = hensel_root(field.min_poly(), prime, k);
    let value = e
        .coords()
        .iter()
        .rev()
        .fold(BigInt::zero(), |acc, c| (acc * &root + c).mod_floor(&modulus));
    if value.is_zero() {
        return k;
    }
    p_adic_valuation(value.magnitude(), p)
}

/// The root of `g` in `Z/p^k` above the simple root of `g mod p` given by
/// the local factor `x + c`.
fn hensel_root(g: &[BigInt], prime: &PrimeIdeal, k: u32) -> BigInt {
    let p = BigInt::from(prime.p());
    let dg: Vec<BigInt> = g.iter().enumerate().skip(1).map(|(i, c)| c * i).collect();
    let eval = |poly: &[BigInt], x: &BigInt, m: &BigInt| {
        poly.iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| (acc * x + c).mod_floor(m))
    };
    let mut r = (-BigInt::from(prime.local_factor()[0])).mod_floor(&p);
    let mut prec = 1u32;
    while prec < k {
        prec = (2 * prec).min(k);
        let m = p.pow(prec);
        let num = eval(g, &r, &m);
        let den = eval(&dg, &r, &m);
        let inv = den.modinv(&m).expect("simple root: derivative is a unit");
        r = (r - num * inv).mod_floor(&m);
    }
    r
}

/// General path: the largest `k` with `e` in `P^k`, found by doubling then
/// binary search, never beyond `v_p(|N(e)|) / f_P`.
pub fn valuation_hnf(field: &NumberField, e: &FieldElement, prime: &PrimeIdeal) -> u32 {
    assert!(!e.is_zero(), "valuation of zero");
    let bound = p_adic_valuation(field.norm(e).magnitude(), prime.p()) / prime.residue_degree();
    if bound == 0 {
        return 0;
    }
    let base = IdealHnf::prime(field, prime);
    if !base.contains(e) {
        return 0;
    }
    // e in P^lo, and either hi > bound or e not in P^hi
    let mut lo = 1u32;
    let mut hi = bound + 1;
    let mut cur = base.clone();
    while 2 * lo <= bound {
        let next = cur.mul(field, &cur);
        if next.contains(e) {
            lo *= 2;
            cur = next;
        } else {
            hi = 2 * lo;
            break;
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if base.pow(field, mid).contains(e) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Prime factorization of the principal ideal `e O_K`, primes in canonical
/// order. Found by factoring `|N(e)|` and testing the primes above each
/// rational prime factor.
pub fn ideal_factorization(field: &NumberField, e: &FieldElement) -> Result<Vec<(PrimeIdeal, u32)>> {
    assert!(!e.is_zero(), "factorization of zero");
    let norm = field.norm(e).abs();
    let mut out = Vec::new();
    for (p, a) in factor(norm.magnitude())?.to_u64()? {
        let above = field.primes_above(p)?;
        if let [only] = &above[..] {
            // the only prime above p carries the whole p-part of the norm
            out.push((only.clone(), a / only.residue_degree()));
            continue;
        }
        let mut remaining = a;
        let last = above.len() - 1;
        for (i, prime) in above.iter().enumerate() {
            let v = if i == last {
                remaining / prime.residue_degree()
            } else {
                valuation(field, e, prime)
            };
            remaining -= v * prime.residue_degree();
            if v > 0 {
                out.push((prime.clone(), v));
            }
        }
        debug_assert_eq!(remaining, 0);
    }
    Ok(out)
}
