use std::cmp::Ordering;

use num_bigint::BigUint;

use super::field::Field;

/// Polynomial over a finite field, coefficients lowest degree first, with no
/// trailing zeros. Build values through [`PolyRing`], which owns the
/// normalization.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FqPoly<E> {
    coeffs: Vec<E>,
}

impl<E> FqPoly<E> {
    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// Canonical order: by degree, then lexicographically on coefficients from
/// the constant term upward.
impl<E: Ord> Ord for FqPoly<E> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl<E: Ord> PartialOrd for FqPoly<E> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Arithmetic in `F_q[x]`.
#[derive(Debug, Clone, Copy)]
pub struct PolyRing<'a, F: Field> {
    field: &'a F,
}

type P<F> = FqPoly<<F as Field>::Elem>;

impl<'a, F: Field> PolyRing<'a, F> {
    pub fn new(field: &'a F) -> Self {
        PolyRing { field }
    }

    pub fn field(&self) -> &'a F {
        self.field
    }

    pub fn poly(&self, mut coeffs: Vec<F::Elem>) -> P<F> {
        while coeffs.last().is_some_and(|c| self.field.is_zero(c)) {
            coeffs.pop();
        }
        FqPoly { coeffs }
    }

    pub fn zero(&self) -> P<F> {
        FqPoly { coeffs: Vec::new() }
    }

    pub fn one(&self) -> P<F> {
        self.constant(self.field.one())
    }

    pub fn constant(&self, c: F::Elem) -> P<F> {
        self.poly(vec![c])
    }

    /// The indeterminate `x`.
    pub fn x(&self) -> P<F> {
        self.poly(vec![self.field.zero(), self.field.one()])
    }

    pub fn is_one(&self, a: &P<F>) -> bool {
        a.coeffs.len() == 1 && a.coeffs[0] == self.field.one()
    }

    pub fn is_monic(&self, a: &P<F>) -> bool {
        a.coeffs.last() == Some(&self.field.one())
    }

    pub fn add(&self, a: &P<F>, b: &P<F>) -> P<F> {
        let k = self.field;
        let n = a.coeffs.len().max(b.coeffs.len());
        let zero = k.zero();
        let v = (0..n)
            .map(|i| k.add(a.coeffs.get(i).unwrap_or(&zero), b.coeffs.get(i).unwrap_or(&zero)))
            .collect();
        self.poly(v)
    }

    pub fn sub(&self, a: &P<F>, b: &P<F>) -> P<F> {
        let k = self.field;
        let n = a.coeffs.len().max(b.coeffs.len());
        let zero = k.zero();
        let v = (0..n)
            .map(|i| k.sub(a.coeffs.get(i).unwrap_or(&zero), b.coeffs.get(i).unwrap_or(&zero)))
            .collect();
        self.poly(v)
    }

    pub fn scale(&self, a: &P<F>, c: &F::Elem) -> P<F> {
        self.poly(a.coeffs.iter().map(|x| self.field.mul(x, c)).collect())
    }

    pub fn mul(&self, a: &P<F>, b: &P<F>) -> P<F> {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let k = self.field;
        let mut out = vec![k.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if k.is_zero(x) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                out[i + j] = k.add(&out[i + j], &k.mul(x, y));
            }
        }
        self.poly(out)
    }

    /// Quotient and remainder; panics when `b` is zero.
    pub fn divrem(&self, a: &P<F>, b: &P<F>) -> (P<F>, P<F>) {
        let k = self.field;
        let db = b.degree().expect("division by the zero polynomial");
        let Some(da) = a.degree() else {
            return (self.zero(), self.zero());
        };
        if da < db {
            return (self.zero(), a.clone());
        }
        let lead_inv = k.inv(&b.coeffs[db]);
        let mut r = a.coeffs.clone();
        let mut q = vec![k.zero(); da - db + 1];
        for i in (0..=da - db).rev() {
            let c = k.mul(&r[i + db], &lead_inv);
            if k.is_zero(&c) {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                r[i + j] = k.sub(&r[i + j], &k.mul(&c, y));
            }
            q[i] = c;
        }
        r.truncate(db);
        (self.poly(q), self.poly(r))
    }

    pub fn rem(&self, a: &P<F>, b: &P<F>) -> P<F> {
        self.divrem(a, b).1
    }

    /// Exact division; debug-asserts a zero remainder.
    pub fn div_exact(&self, a: &P<F>, b: &P<F>) -> P<F> {
        let (q, r) = self.divrem(a, b);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn monic(&self, a: &P<F>) -> P<F> {
        match a.coeffs.last() {
            None => self.zero(),
            Some(lead) => self.scale(a, &self.field.inv(lead)),
        }
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, a: &P<F>, b: &P<F>) -> P<F> {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    pub fn derivative(&self, a: &P<F>) -> P<F> {
        let k = self.field;
        let v = a
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| k.mul(c, &k.from_u64(i as u64)))
            .collect();
        self.poly(v)
    }

    pub fn mulmod(&self, a: &P<F>, b: &P<F>, m: &P<F>) -> P<F> {
        self.rem(&self.mul(a, b), m)
    }

    pub fn powmod(&self, a: &P<F>, e: &BigUint, m: &P<F>) -> P<F> {
        let base = self.rem(a, m);
        let mut acc = self.rem(&self.one(), m);
        for i in (0..e.bits()).rev() {
            acc = self.mulmod(&acc, &acc, m);
            if e.bit(i) {
                acc = self.mulmod(&acc, &base, m);
            }
        }
        acc
    }

    pub fn eval(&self, a: &P<F>, x: &F::Elem) -> F::Elem {
        let k = self.field;
        a.coeffs
            .iter()
            .rev()
            .fold(k.zero(), |acc, c| k.add(&k.mul(&acc, x), c))
    }

    /// For `a` with zero derivative, the polynomial `b` with `b^p = a`.
    pub fn pth_root(&self, a: &P<F>) -> P<F> {
        let k = self.field;
        let p = k.characteristic() as usize;
        let v = a
            .coeffs
            .iter()
            .step_by(p)
            .map(|c| k.pth_root(c))
            .collect();
        self.poly(v)
    }
}
