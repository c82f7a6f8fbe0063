use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::enumerate::quadratic_form_points;
use super::linalg::determinant;
use super::prime::PrimeIdeal;
use crate::arith::{factor, format_int_poly, parse_int_poly, primes_up_to};
use crate::error::{Error, Result};
use crate::ff::{factor_fq, PolyRing, PrimeField};

/// Element of `Z[theta]` in power-basis coordinates `c_0 + c_1 theta + ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldElement {
    coords: Vec<BigInt>,
}

impl FieldElement {
    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn degree(&self) -> usize {
        self.coords.len()
    }

    pub fn add(&self, other: &Self) -> Self {
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect();
        FieldElement { coords }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect();
        FieldElement { coords }
    }

    pub fn neg(&self) -> Self {
        FieldElement {
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        FieldElement {
            coords: self.coords.iter().map(|a| a * k).collect(),
        }
    }

    /// Largest absolute coordinate (the height of a single coefficient).
    pub fn height(&self) -> BigInt {
        self.coords.iter().map(|c| c.abs()).max().unwrap_or_default()
    }
}

/// Integers print bare, everything else as a coordinate tuple `(c0,c1,..)`.
impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.len() == 1 {
            return write!(f, "{}", self.coords[0]);
        }
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A monogenic number field `K = Q(theta)`, `g(theta) = 0`, with ring of
/// integers `Z[theta]`. Construction verifies irreducibility and
/// monogenicity.
#[derive(Debug)]
pub struct NumberField {
    g: Vec<BigInt>,
    discriminant: BigInt,
    torsion: Vec<FieldElement>,
    unit_group_finite: bool,
    decompositions: RwLock<HashMap<u64, Arc<[PrimeIdeal]>>>,
}

impl Clone for NumberField {
    fn clone(&self) -> Self {
        NumberField {
            g: self.g.clone(),
            discriminant: self.discriminant.clone(),
            torsion: self.torsion.clone(),
            unit_group_finite: self.unit_group_finite,
            decompositions: RwLock::new(self.decompositions.read().unwrap().clone()),
        }
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.g == other.g
    }
}

impl Eq for NumberField {}

impl NumberField {
    /// Parse a field specification such as `"x^2+1"`; `"x"` is `Q`.
    pub fn parse(spec: &str) -> Result<Self> {
        Self::new(parse_int_poly(spec)?)
    }

    pub fn rationals() -> Self {
        Self::new(vec![BigInt::zero(), BigInt::one()]).expect("x defines Q")
    }

    /// `g` lowest coefficient first; must be monic of degree >= 1.
    pub fn new(g: Vec<BigInt>) -> Result<Self> {
        let spec = format_int_poly(&g);
        let d = g.len().checked_sub(1).filter(|&d| d >= 1).ok_or_else(|| {
            Error::InvalidParameter(format!("field polynomial {spec} has degree < 1"))
        })?;
        if !g[d].is_one() {
            return Err(Error::InvalidParameter(format!("field polynomial {spec} is not monic")));
        }
        let discriminant = poly_discriminant(&g);
        if d >= 2 {
            if discriminant.is_zero() || has_integer_root(&g)? {
                return Err(Error::Reducible(spec));
            }
            if d == 2 && is_square(&discriminant) {
                return Err(Error::Reducible(spec));
            }
            if d >= 4 && !degree_patterns_certify_irreducible(&g, &discriminant) {
                return Err(Error::UnsupportedField(format!(
                    "irreducibility of {spec} could not be certified from factorization patterns"
                )));
            }
            check_monogenic(&g, &discriminant)?;
        }
        let mut field = NumberField {
            g,
            discriminant,
            torsion: Vec::new(),
            unit_group_finite: false,
            decompositions: RwLock::new(HashMap::new()),
        };
        if d == 1 {
            field.unit_group_finite = true;
            field.torsion = vec![field.one(), field.one().neg()];
        } else if d == 2 && field.discriminant.is_negative() {
            field.unit_group_finite = true;
            let (b, c) = field.quadratic_coefficients()?;
            field.torsion = quadratic_form_points(b, c, 1)
                .into_iter()
                .map(|(x, y)| field.element_i64(&[x, y]))
                .collect();
            field.torsion.sort();
        }
        Ok(field)
    }

    pub fn degree(&self) -> usize {
        self.g.len() - 1
    }

    pub fn min_poly(&self) -> &[BigInt] {
        &self.g
    }

    /// The specification string, e.g. `x^2 + 1`.
    pub fn spec(&self) -> String {
        format_int_poly(&self.g)
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.discriminant
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    /// True for `Q` and imaginary quadratic fields.
    pub fn unit_group_finite(&self) -> bool {
        self.unit_group_finite
    }

    pub fn is_imaginary_quadratic(&self) -> bool {
        self.degree() == 2 && self.discriminant.is_negative()
    }

    /// Roots of unity of `Z[theta]`, sorted; empty when the unit group is
    /// infinite.
    pub fn torsion_units(&self) -> &[FieldElement] {
        &self.torsion
    }

    /// `(b, c)` for `g = x^2 + b x + c`.
    pub(crate) fn quadratic_coefficients(&self) -> Result<(i64, i64)> {
        let err = || Error::UnsupportedField(format!("{} is not a small quadratic", self.spec()));
        if self.degree() != 2 {
            return Err(err());
        }
        Ok((self.g[1].to_i64().ok_or_else(err)?, self.g[0].to_i64().ok_or_else(err)?))
    }

    pub fn element(&self, coords: Vec<BigInt>) -> Result<FieldElement> {
        if coords.len() != self.degree() {
            return Err(Error::InvalidParameter(format!(
                "element has {} coordinates, field degree is {}",
                coords.len(),
                self.degree()
            )));
        }
        Ok(FieldElement { coords })
    }

    /// Panics when `coords.len()` differs from the degree.
    pub fn element_i64(&self, coords: &[i64]) -> FieldElement {
        assert_eq!(coords.len(), self.degree(), "coordinate count");
        FieldElement {
            coords: coords.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    /// Parse `"(a,b,..)"` or, for the integer `a`, `"a"`.
    pub fn parse_element(&self, text: &str) -> Result<FieldElement> {
        let err = |msg: &str| Error::Parse {
            what: "field element",
            input: text.to_string(),
            msg: msg.to_string(),
        };
        let t = text.trim();
        let inner = t.strip_prefix('(').and_then(|s| s.strip_suffix(')'));
        let coords: Vec<BigInt> = match inner {
            Some(body) => body
                .split(',')
                .map(|s| s.trim().parse::<BigInt>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| err(&e.to_string()))?,
            None => {
                let a: BigInt = t.parse().map_err(|e: num_bigint::ParseBigIntError| err(&e.to_string()))?;
                let mut v = vec![BigInt::zero(); self.degree()];
                v[0] = a;
                v
            }
        };
        self.element(coords).map_err(|_| err("wrong number of coordinates"))
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            coords: vec![BigInt::zero(); self.degree()],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.integer(BigInt::one())
    }

    pub fn integer(&self, a: BigInt) -> FieldElement {
        let mut coords = vec![BigInt::zero(); self.degree()];
        coords[0] = a;
        FieldElement { coords }
    }

    /// The generator `theta` (for `Q`, the root `-g(0)`).
    pub fn theta(&self) -> FieldElement {
        if self.degree() == 1 {
            return self.integer(-&self.g[0]);
        }
        let mut coords = vec![BigInt::zero(); self.degree()];
        coords[1] = BigInt::one();
        FieldElement { coords }
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let d = self.degree();
        if d == 1 {
            return FieldElement {
                coords: vec![&a.coords[0] * &b.coords[0]],
            };
        }
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        self.reduce_poly(prod)
    }

    /// Reduce an integer polynomial in `theta` modulo `g`.
    pub fn reduce_poly(&self, mut v: Vec<BigInt>) -> FieldElement {
        let d = self.degree();
        if d == 1 {
            // theta = -g0
            let t = -&self.g[0];
            let value = v.iter().rev().fold(BigInt::zero(), |acc, c| acc * &t + c);
            return FieldElement { coords: vec![value] };
        }
        for k in (d..v.len()).rev() {
            let c = std::mem::take(&mut v[k]);
            if c.is_zero() {
                continue;
            }
            for i in 0..d {
                v[k - d + i] -= &c * &self.g[i];
            }
        }
        v.resize(d, BigInt::zero());
        FieldElement { coords: v }
    }

    pub fn pow(&self, a: &FieldElement, mut e: u32) -> FieldElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Evaluate `sum c_k X^k` (coefficients in `O_K`, lowest first) at `x`.
    pub fn eval_poly(&self, coeffs: &[FieldElement], x: &FieldElement) -> FieldElement {
        coeffs
            .iter()
            .rev()
            .fold(self.zero(), |acc, c| self.mul(&acc, x).add(c))
    }

    /// Matrix of multiplication by `a`; row `j` holds the coordinates of
    /// `a * theta^j`.
    pub fn mul_matrix(&self, a: &FieldElement) -> Vec<Vec<BigInt>> {
        let d = self.degree();
        let mut rows = Vec::with_capacity(d);
        let mut cur = a.clone();
        let theta = self.theta();
        for j in 0..d {
            if j > 0 {
                cur = self.mul(&cur, &theta);
            }
            rows.push(cur.coords.clone());
        }
        rows
    }

    /// Absolute norm `N_{K/Q}(a)`.
    pub fn norm(&self, a: &FieldElement) -> BigInt {
        match self.degree() {
            1 => a.coords[0].clone(),
            2 => {
                // x^2 - b x y + c y^2 for g = t^2 + b t + c
                let (x, y) = (&a.coords[0], &a.coords[1]);
                x * x - &self.g[1] * x * y + &self.g[0] * y * y
            }
            _ => determinant(self.mul_matrix(a)),
        }
    }

    /// `g mod p`, lowest coefficient first.
    pub fn min_poly_mod(&self, p: u64) -> Vec<u64> {
        self.g.iter().map(|c| mod_u64(c, p)).collect()
    }

    /// Primes above the rational prime `p`, sorted canonically. Results are
    /// cached per field.
    pub fn primes_above(&self, p: u64) -> Result<Arc<[PrimeIdeal]>> {
        if let Some(v) = self.decompositions.read().unwrap().get(&p) {
            return Ok(v.clone());
        }
        let v: Arc<[PrimeIdeal]> = decompose(&self.g, p)?.into();
        self.decompositions.write().unwrap().insert(p, v.clone());
        Ok(v)
    }
}

/// `c mod p` in `[0, p)`.
pub(crate) fn mod_u64(c: &BigInt, p: u64) -> u64 {
    if p <= i64::MAX as u64 {
        if let Some(v) = c.to_i64() {
            return v.rem_euclid(p as i64) as u64;
        }
    }
    c.mod_floor(&BigInt::from(p)).to_u64().expect("residue below p")
}

/// Dedekind factorization of `g` at `p`.
pub(crate) fn decompose(g: &[BigInt], p: u64) -> Result<Vec<PrimeIdeal>> {
    let field = PrimeField::new(p)?;
    let ring = PolyRing::new(&field);
    let gp = ring.poly(g.iter().map(|c| mod_u64(c, p)).collect());
    let mut rng = ChaCha8Rng::seed_from_u64(p);
    Ok(factor_fq(&field, &gp, &mut rng)
        .into_iter()
        .map(|(h, e)| PrimeIdeal::new(p, h.into_coeffs(), e))
        .collect())
}

fn int_poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Discriminant of a monic integer polynomial, `(-1)^(d(d-1)/2) Res(g, g')`.
pub fn poly_discriminant(g: &[BigInt]) -> BigInt {
    let d = g.len() - 1;
    if d <= 1 {
        return BigInt::one();
    }
    let dg: Vec<BigInt> = g.iter().enumerate().skip(1).map(|(i, c)| c * i).collect();
    let res = resultant(g, &dg);
    if (d * (d - 1) / 2) % 2 == 1 {
        -res
    } else {
        res
    }
}

/// Resultant via the Sylvester matrix; both inputs lowest coefficient first.
fn resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let m = a.len() - 1;
    let n = b.len() - 1;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![BigInt::zero(); size];
        for (j, c) in a.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![BigInt::zero(); size];
        for (j, c) in b.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    determinant(rows)
}

fn is_square(n: &BigInt) -> bool {
    match n.to_biguint() {
        Some(u) => {
            let r = u.sqrt();
            &r * &r == u
        }
        None => false,
    }
}

fn eval_int(g: &[BigInt], x: &BigInt) -> BigInt {
    g.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// Rational roots of a monic integer polynomial are integer divisors of the
/// constant term.
fn has_integer_root(g: &[BigInt]) -> Result<bool> {
    let c0 = &g[0];
    if c0.is_zero() {
        return Ok(true);
    }
    let fac = factor(&c0.magnitude().clone())?;
    let mut divisors = vec![BigUint::one()];
    for (p, e) in fac.factors() {
        let mut next = Vec::with_capacity(divisors.len() * (*e as usize + 1));
        for d in &divisors {
            let mut pk = d.clone();
            for _ in 0..=*e {
                next.push(pk.clone());
                pk *= p;
            }
        }
        divisors = next;
    }
    Ok(divisors.into_iter().any(|d| {
        let d = BigInt::from_biguint(Sign::Plus, d);
        eval_int(g, &d).is_zero() || eval_int(g, &-d).is_zero()
    }))
}

/// Intersect, over unramified primes, the sets of degrees of factors of `g`
/// over `Q` compatible with the factorization mod `p`. Only `{0, d}` left
/// proves irreducibility.
fn degree_patterns_certify_irreducible(g: &[BigInt], disc: &BigInt) -> bool {
    let d = g.len() - 1;
    let mut possible = vec![true; d + 1];
    let mut examined = 0;
    for p in primes_up_to(20_000) {
        if (disc % BigInt::from(p)).is_zero() {
            continue;
        }
        let Ok(ideals) = decompose(g, p) else { continue };
        let mut sums = vec![false; d + 1];
        sums[0] = true;
        for ideal in ideals.iter() {
            let f = ideal.residue_degree() as usize;
            for s in (f..=d).rev() {
                if sums[s - f] {
                    sums[s] = true;
                }
            }
        }
        for (slot, ok) in possible.iter_mut().zip(sums) {
            *slot &= ok;
        }
        if possible[1..d].iter().all(|&b| !b) {
            return true;
        }
        examined += 1;
        if examined >= 300 {
            break;
        }
    }
    false
}

/// Dedekind index criterion at every `p` with `p^2 | disc`.
fn check_monogenic(g: &[BigInt], disc: &BigInt) -> Result<()> {
    let fac = factor(disc.magnitude())?;
    for (p, e) in fac.to_u64()? {
        if e < 2 {
            continue;
        }
        let field = PrimeField::new(p)?;
        let ring = PolyRing::new(&field);
        let gp = ring.poly(g.iter().map(|c| mod_u64(c, p)).collect());
        let mut rng = ChaCha8Rng::seed_from_u64(p);
        let factors = factor_fq(&field, &gp, &mut rng);
        let mut lifted = vec![BigInt::one()];
        for (h, mult) in &factors {
            let hz: Vec<BigInt> = h.coeffs().iter().map(|&c| BigInt::from(c)).collect();
            for _ in 0..*mult {
                lifted = int_poly_mul(&lifted, &hz);
            }
        }
        let pb = BigInt::from(p);
        let fbar = ring.poly(
            g.iter()
                .zip(&lifted)
                .map(|(a, b)| {
                    let diff = a - b;
                    debug_assert!((&diff % &pb).is_zero());
                    mod_u64(&(diff / &pb), p)
                })
                .collect(),
        );
        for (h, mult) in &factors {
            if *mult >= 2 && ring.rem(&fbar, h).is_zero() {
                return Err(Error::NotMonogenic { p });
            }
        }
    }
    Ok(())
}
