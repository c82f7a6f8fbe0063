//! Squarefree, distinct-degree and equal-degree (Cantor-Zassenhaus)
//! factorization over `F_q`.

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;

use super::field::Field;
use super::poly::{FqPoly, PolyRing};
use crate::splitting_type::SplittingType;

type P<F> = FqPoly<<F as Field>::Elem>;

/// `f = prod a_i^i` with pairwise coprime squarefree `a_i`; `f` monic of
/// positive degree. Entries are `(a_i, i)` with `a_i != 1`.
pub fn squarefree_decomposition<F: Field>(field: &F, f: &P<F>) -> Vec<(P<F>, u32)> {
    let ring = PolyRing::new(field);
    let mut out = Vec::new();
    let df = ring.derivative(f);
    if df.is_zero() {
        let p = field.characteristic() as u32;
        for (g, m) in squarefree_decomposition(field, &ring.pth_root(f)) {
            out.push((g, m * p));
        }
        return out;
    }
    let mut c = ring.gcd(f, &df);
    let mut w = ring.div_exact(f, &c);
    let mut i = 1u32;
    while !ring.is_one(&w) {
        let y = ring.gcd(&w, &c);
        let fac = ring.div_exact(&w, &y);
        if !ring.is_one(&fac) {
            out.push((fac, i));
        }
        w = y;
        c = ring.div_exact(&c, &w);
        i += 1;
    }
    if !ring.is_one(&c) {
        let p = field.characteristic() as u32;
        for (g, m) in squarefree_decomposition(field, &ring.pth_root(&c)) {
            out.push((g, m * p));
        }
    }
    out
}

pub fn is_squarefree<F: Field>(field: &F, f: &P<F>) -> bool {
    let ring = PolyRing::new(field);
    let df = ring.derivative(f);
    !df.is_zero() && ring.is_one(&ring.gcd(f, &df))
}

/// For squarefree monic `f`: pairs `(d, g_d)` where `g_d` is the product of
/// all irreducible factors of degree `d`, increasing in `d`.
pub fn distinct_degree<F: Field>(field: &F, f: &P<F>) -> Vec<(usize, P<F>)> {
    let ring = PolyRing::new(field);
    let q = field.order();
    let x = ring.x();
    let mut rest = f.clone();
    let mut h = ring.rem(&x, &rest);
    let mut out = Vec::new();
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 2 * d {
        h = ring.powmod(&h, &q, &rest);
        let g = ring.gcd(&rest, &ring.sub(&h, &x));
        if !ring.is_one(&g) {
            rest = ring.div_exact(&rest, &g);
            h = ring.rem(&h, &rest);
            out.push((d, g));
        }
        d += 1;
    }
    if let Some(deg) = rest.degree() {
        if deg > 0 {
            out.push((deg, rest));
        }
    }
    out
}

/// Split a squarefree monic `f` whose irreducible factors all have degree
/// `d` into those factors (unsorted).
pub fn equal_degree<F: Field, R: Rng + ?Sized>(
    field: &F,
    f: &P<F>,
    d: usize,
    rng: &mut R,
) -> Vec<P<F>> {
    let ring = PolyRing::new(field);
    let n = f.degree().expect("nonzero polynomial");
    if n == d {
        return vec![f.clone()];
    }
    let q = field.order();
    let p = field.characteristic();
    loop {
        let a = ring.poly((0..n).map(|_| field.random(rng)).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let g = ring.gcd(&a, f);
        if !ring.is_one(&g) {
            return split_on(field, f, g, d, rng);
        }
        let b = if p == 2 {
            // trace to F_2: a + a^2 + ... + a^(2^(k d - 1)), q = 2^k
            let steps = field.extension_degree() * d;
            let mut s = a.clone();
            let mut t = a.clone();
            for _ in 1..steps {
                s = ring.mulmod(&s, &s, f);
                t = ring.add(&t, &s);
            }
            t
        } else {
            let e = (q.pow(d as u32) - BigUint::one()) >> 1;
            ring.sub(&ring.powmod(&a, &e, f), &ring.one())
        };
        let g = ring.gcd(&b, f);
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < n {
            return split_on(field, f, g, d, rng);
        }
    }
}

fn split_on<F: Field, R: Rng + ?Sized>(
    field: &F,
    f: &P<F>,
    g: P<F>,
    d: usize,
    rng: &mut R,
) -> Vec<P<F>> {
    let ring = PolyRing::new(field);
    let other = ring.div_exact(f, &g);
    let mut out = equal_degree(field, &g, d, rng);
    out.extend(equal_degree(field, &other, d, rng));
    out
}

/// Complete factorization of a polynomial of positive degree into monic
/// irreducibles with multiplicities, sorted canonically (degree, then
/// coefficients from the constant term up). The leading coefficient is
/// dropped.
pub fn factor_fq<F: Field, R: Rng + ?Sized>(field: &F, f: &P<F>, rng: &mut R) -> Vec<(P<F>, u32)> {
    let ring = PolyRing::new(field);
    assert!(f.degree().unwrap_or(0) >= 1, "factor_fq needs positive degree");
    let f = ring.monic(f);
    let mut out = Vec::new();
    for (part, mult) in squarefree_decomposition(field, &f) {
        for (d, g) in distinct_degree(field, &part) {
            for h in equal_degree(field, &g, d, rng) {
                out.push((h, mult));
            }
        }
    }
    out.sort();
    out
}

/// Factorization pattern of a monic squarefree `f` of degree `n`; `None`
/// when `f` has a repeated factor.
pub fn splitting_type<F: Field>(field: &F, f: &P<F>) -> Option<SplittingType> {
    let n = f.degree()?;
    if n == 0 || !is_squarefree(field, f) {
        return None;
    }
    let ring = PolyRing::new(field);
    let f = ring.monic(f);
    let mut counts = vec![0u32; n];
    for (d, g) in distinct_degree(field, &f) {
        counts[d - 1] += (g.degree().unwrap() / d) as u32;
    }
    Some(SplittingType::new(counts).expect("degrees sum to n"))
}

pub fn is_irreducible<F: Field>(field: &F, f: &P<F>) -> bool {
    let n = match f.degree() {
        Some(n) if n >= 1 => n,
        _ => return false,
    };
    if n == 1 {
        return true;
    }
    if !is_squarefree(field, f) {
        return false;
    }
    let ring = PolyRing::new(field);
    let f = ring.monic(f);
    matches!(distinct_degree(field, &f).as_slice(), [(d, _)] if *d == n)
}

/// Number of distinct roots of `f` in `F_q`: `deg gcd(x^q - x, f)`.
pub fn count_distinct_roots<F: Field>(field: &F, f: &P<F>) -> usize {
    let ring = PolyRing::new(field);
    if f.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let f = ring.monic(f);
    let xq = ring.powmod(&ring.x(), &field.order(), &f);
    ring.gcd(&f, &ring.sub(&xq, &ring.x())).degree().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::super::field::{ExtensionField, PrimeField};
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(7)
    }

    #[test]
    fn factor_examples() {
        let f2 = PrimeField::new(2).unwrap();
        let r2 = PolyRing::new(&f2);
        assert_eq!(
            factor_fq(&f2, &r2.poly(vec![1, 0, 1]), &mut rng()),
            vec![(r2.poly(vec![1, 1]), 2)]
        );
        assert_eq!(
            factor_fq(&f2, &r2.poly(vec![1, 1, 1]), &mut rng()),
            vec![(r2.poly(vec![1, 1, 1]), 1)]
        );
        let f5 = PrimeField::new(5).unwrap();
        let r5 = PolyRing::new(&f5);
        assert_eq!(
            factor_fq(&f5, &r5.poly(vec![1, 0, 1]), &mut rng()),
            vec![(r5.poly(vec![2, 1]), 1), (r5.poly(vec![3, 1]), 1)]
        );
    }

    #[test]
    fn splitting_type_examples() {
        let f5 = PrimeField::new(5).unwrap();
        let r5 = PolyRing::new(&f5);
        assert_eq!(splitting_type(&f5, &r5.poly(vec![1, 0, 1])).unwrap().to_string(), "2,0");
        let f2 = PrimeField::new(2).unwrap();
        let r2 = PolyRing::new(&f2);
        assert_eq!(splitting_type(&f2, &r2.poly(vec![1, 1, 1])).unwrap().to_string(), "0,1");
        assert_eq!(splitting_type(&f2, &r2.poly(vec![1, 0, 1])), None);
    }

    #[test]
    fn pure_pth_powers_factor() {
        // x^6 + 1 = (x^2 + 1)^3 = (x+1)^6... over F_3: x^6+1 = (x^2+1)^3
        let f3 = PrimeField::new(3).unwrap();
        let r3 = PolyRing::new(&f3);
        let f = r3.poly(vec![1, 0, 0, 0, 0, 0, 1]);
        assert_eq!(factor_fq(&f3, &f, &mut rng()), vec![(r3.poly(vec![1, 0, 1]), 3)]);
        // x^4 + x^2 + 1 over F_2 = (x^2 + x + 1)^2
        let f2 = PrimeField::new(2).unwrap();
        let r2 = PolyRing::new(&f2);
        let f = r2.poly(vec![1, 0, 1, 0, 1]);
        assert_eq!(factor_fq(&f2, &f, &mut rng()), vec![(r2.poly(vec![1, 1, 1]), 2)]);
    }

    #[test]
    fn factors_over_extension_fields() {
        // x^2 + 1 splits over F_9 = F_3[t]/(t^2 + 1): roots t and -t
        let f9 = ExtensionField::new(3, 2).unwrap();
        let r = PolyRing::new(&f9);
        let f = r.poly(vec![f9.one(), f9.zero(), f9.one()]);
        let fac = factor_fq(&f9, &f, &mut rng());
        assert_eq!(fac.len(), 2);
        assert!(fac.iter().all(|(g, m)| g.degree() == Some(1) && *m == 1));
        // x^2 + x + 1 splits over F_4
        let f4 = ExtensionField::new(2, 2).unwrap();
        let r = PolyRing::new(&f4);
        let f = r.poly(vec![f4.one(), f4.one(), f4.one()]);
        assert_eq!(splitting_type(&f4, &f).unwrap().to_string(), "2,0");
    }

    #[test]
    fn distinct_root_count() {
        let f2 = PrimeField::new(2).unwrap();
        let r2 = PolyRing::new(&f2);
        assert_eq!(count_distinct_roots(&f2, &r2.poly(vec![1, 0, 1])), 1);
        let f5 = PrimeField::new(5).unwrap();
        let r5 = PolyRing::new(&f5);
        assert_eq!(count_distinct_roots(&f5, &r5.poly(vec![1, 0, 1])), 2);
        let f3 = PrimeField::new(3).unwrap();
        let r3 = PolyRing::new(&f3);
        assert_eq!(count_distinct_roots(&f3, &r3.poly(vec![1, 0, 1])), 0);
    }
}
