use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;

use super::poly::PolyRing;
use crate::arith::{inv_mod, is_prime_u64, mul_mod};
use crate::error::{Error, Result};

/// A finite field `F_q`, `q = p^f`. Elements are plain values; all
/// arithmetic goes through the field handle.
pub trait Field: Clone + fmt::Debug + Send + Sync {
    /// Ordered by the canonical coefficient encoding.
    type Elem: Clone + PartialEq + Eq + Ord + Hash + fmt::Debug + Send + Sync;

    fn characteristic(&self) -> u64;
    fn extension_degree(&self) -> usize;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    /// Image of the integer `v` under `Z -> F_q`.
    fn from_u64(&self, v: u64) -> Self::Elem;
    /// Bijection `[0, q) -> F_q` used for exhaustive enumeration.
    fn element(&self, index: u64) -> Self::Elem;
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn order(&self) -> BigUint {
        BigUint::from(self.characteristic()).pow(self.extension_degree() as u32)
    }

    /// `q` when it fits in 64 bits.
    fn order_u64(&self) -> Option<u64> {
        self.characteristic().checked_pow(self.extension_degree() as u32)
    }

    fn pow(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// The unique `b` with `b^p = a`, namely `a^(q/p)`.
    fn pth_root(&self, a: &Self::Elem) -> Self::Elem {
        let e = self.order() / BigUint::from(self.characteristic());
        self.pow(a, &e)
    }
}

/// `F_p` with elements as residues in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Reduce a signed integer into `[0, p)`.
    pub fn reduce_i128(&self, v: i128) -> u64 {
        v.rem_euclid(self.p as i128) as u64
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn characteristic(&self) -> u64 {
        self.p
    }
    fn extension_degree(&self) -> usize {
        1
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let (s, overflow) = a.overflowing_add(*b);
        if overflow || s >= self.p {
            s.wrapping_sub(self.p)
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            self.p - (b - a)
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.p)
    }
    fn inv(&self, a: &u64) -> u64 {
        inv_mod(*a, self.p).expect("inverse of zero in F_p")
    }
    fn from_u64(&self, v: u64) -> u64 {
        v % self.p
    }
    fn element(&self, index: u64) -> u64 {
        index % self.p
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
    fn pth_root(&self, a: &u64) -> u64 {
        *a
    }
}

/// `F_p[t]/(m(t))` for a monic irreducible `m` of degree `f`. Elements are
/// coefficient vectors of length `f`, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtensionField {
    base: PrimeField,
    modulus: Arc<[u64]>,
}

impl ExtensionField {
    /// `F_{p^f}` relative to the first monic irreducible of degree `f` in the
    /// enumeration order `index = sum c_i p^i` over the lower coefficients.
    /// For `f = 1` this is the modulus `t`.
    pub fn new(p: u64, f: usize) -> Result<Self> {
        let base = PrimeField::new(p)?;
        if f == 0 {
            return Err(Error::InvalidParameter("extension degree must be >= 1".into()));
        }
        let ring = PolyRing::new(&base);
        let count = p
            .checked_pow(f as u32)
            .ok_or_else(|| Error::InvalidParameter(format!("F_{{{p}^{f}}} is too large")))?;
        for index in 0..count {
            let mut coeffs = Vec::with_capacity(f + 1);
            let mut i = index;
            for _ in 0..f {
                coeffs.push(i % p);
                i /= p;
            }
            coeffs.push(1);
            let m = ring.poly(coeffs.clone());
            if super::factor::is_irreducible(&base, &m) {
                return Ok(ExtensionField {
                    base,
                    modulus: coeffs.into(),
                });
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    /// `F_p[t]/(modulus)`; the modulus (lowest coefficient first) must be
    /// monic and irreducible.
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self> {
        let base = PrimeField::new(p)?;
        let ring = PolyRing::new(&base);
        let m = ring.poly(modulus.iter().map(|c| c % p).collect());
        let monic = m.coeffs().last() == Some(&1);
        if !monic || m.degree().unwrap_or(0) == 0 || !super::factor::is_irreducible(&base, &m) {
            return Err(Error::ReducibleModulus {
                p,
                modulus: format!("{modulus:?}"),
            });
        }
        Ok(ExtensionField {
            base,
            modulus: m.coeffs().to_vec().into(),
        })
    }

    /// Caller guarantees `modulus` is monic irreducible over `F_p`.
    pub(crate) fn from_irreducible(base: PrimeField, modulus: Vec<u64>) -> Self {
        ExtensionField {
            base,
            modulus: modulus.into(),
        }
    }

    pub fn base(&self) -> &PrimeField {
        &self.base
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    fn deg(&self) -> usize {
        self.modulus.len() - 1
    }

    /// Reduce an arbitrary polynomial over `F_p` (lowest first) to an element.
    pub fn reduce(&self, coeffs: &[u64]) -> Vec<u64> {
        let f = self.deg();
        let p = &self.base;
        let mut v: Vec<u64> = coeffs.iter().map(|c| c % p.p()).collect();
        while v.len() > f {
            let lead = v.pop().unwrap();
            if lead == 0 {
                continue;
            }
            let shift = v.len() - f;
            for (i, m) in self.modulus[..f].iter().enumerate() {
                v[shift + i] = p.sub(&v[shift + i], &p.mul(&lead, m));
            }
        }
        v.resize(f, 0);
        v
    }
}

impl Field for ExtensionField {
    type Elem = Vec<u64>;

    fn characteristic(&self) -> u64 {
        self.base.p()
    }
    fn extension_degree(&self) -> usize {
        self.deg()
    }
    fn zero(&self) -> Vec<u64> {
        vec![0; self.deg()]
    }
    fn one(&self) -> Vec<u64> {
        let mut v = self.zero();
        v[0] = 1;
        v
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|&c| c == 0)
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let f = self.deg();
        let mut prod = vec![0u64; 2 * f - 1];
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] = self.base.add(&prod[i + j], &self.base.mul(x, y));
            }
        }
        self.reduce(&prod)
    }
    fn inv(&self, a: &Vec<u64>) -> Vec<u64> {
        assert!(!self.is_zero(a), "inverse of zero in F_q");
        let e = self.order() - BigUint::from(2u32);
        self.pow(a, &e)
    }
    fn from_u64(&self, v: u64) -> Vec<u64> {
        let mut out = self.zero();
        out[0] = v % self.base.p();
        out
    }
    fn element(&self, index: u64) -> Vec<u64> {
        let p = self.base.p();
        let mut i = index;
        (0..self.deg())
            .map(|_| {
                let c = i % p;
                i /= p;
                c
            })
            .collect()
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u64> {
        (0..self.deg()).map(|_| self.base.random(rng)).collect()
    }
    fn order(&self) -> BigUint {
        let mut q = BigUint::one();
        for _ in 0..self.deg() {
            q *= self.base.p();
        }
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.add(&5, &4), 2);
        assert_eq!(f.sub(&2, &5), 4);
        assert_eq!(f.mul(&3, &5), 1);
        assert_eq!(f.inv(&3), 5);
        assert!(PrimeField::new(9).is_err());
        let big = PrimeField::new(18446744073709551557).unwrap();
        let a = 18446744073709551556u64;
        assert_eq!(big.add(&a, &a), 18446744073709551555);
        assert_eq!(big.mul(&a, &a), 1);
    }

    #[test]
    fn extension_field_defaults() {
        let f4 = ExtensionField::new(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        let f9 = ExtensionField::new(3, 2).unwrap();
        assert_eq!(f9.modulus(), &[1, 0, 1]);
        let f2 = ExtensionField::new(2, 1).unwrap();
        assert_eq!(f2.modulus(), &[0, 1]);
        assert!(ExtensionField::with_modulus(2, vec![1, 0, 1]).is_err());
    }

    #[test]
    fn every_nonzero_element_is_invertible() {
        for (p, f) in [(2, 2), (3, 2), (2, 3), (5, 2)] {
            let k = ExtensionField::new(p, f).unwrap();
            let q = k.order_u64().unwrap();
            for i in 1..q {
                let a = k.element(i);
                assert_eq!(k.mul(&a, &k.inv(&a)), k.one(), "p={p} f={f} a={a:?}");
                assert_eq!(k.pow(&k.pth_root(&a), &BigUint::from(p)), a);
            }
        }
    }
}
