use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// Univariate polynomial with exact rational coefficients in the
/// indeterminate `q`. Index = degree; trailing zeros are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RationalPoly {
    coeffs: Vec<Rational>,
}

impl RationalPoly {
    pub fn zero() -> Self {
        RationalPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// The indeterminate `q`.
    pub fn q() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_integer(&self, x: &BigInt) -> Rational {
        self.eval(&Rational::from_integer(x.clone()))
    }
}

/// `P (P-1) ... (P-r+1) / r!`, the binomial coefficient `C(P, r)` as a
/// polynomial. `r = 0` gives the constant 1.
pub fn poly_binomial(p: &RationalPoly, r: u32) -> RationalPoly {
    let mut acc = RationalPoly::one();
    let mut factorial = BigInt::one();
    for j in 0..r {
        let shifted = p - &RationalPoly::constant(Rational::from_integer(j.into()));
        acc = &acc * &shifted;
        factorial *= j + 1;
    }
    acc.scale(&Rational::new(BigInt::one(), factorial))
}

impl Add for &RationalPoly {
    type Output = RationalPoly;
    fn add(self, rhs: &RationalPoly) -> RationalPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPoly::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &RationalPoly {
    type Output = RationalPoly;
    fn sub(self, rhs: &RationalPoly) -> RationalPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RationalPoly::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &RationalPoly {
    type Output = RationalPoly;
    fn mul(self, rhs: &RationalPoly) -> RationalPoly {
        if self.is_zero() || rhs.is_zero() {
            return RationalPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RationalPoly::from_coeffs(out)
    }
}

impl Neg for &RationalPoly {
    type Output = RationalPoly;
    fn neg(self) -> RationalPoly {
        RationalPoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RationalPoly {
            type Output = RationalPoly;
            fn $m(self, rhs: RationalPoly) -> RationalPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::iter::Sum for RationalPoly {
    fn sum<I: Iterator<Item = RationalPoly>>(iter: I) -> Self {
        iter.fold(RationalPoly::zero(), |acc, p| &acc + &p)
    }
}

impl fmt::Display for RationalPoly {
    /// Highest degree first, e.g. `1/8*q^4 - 1/4*q^3 - 1/8*q^2 + 1/4*q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            let monomial = match k {
                0 => String::new(),
                1 => "q".to_string(),
                _ => format!("q^{k}"),
            };
            if monomial.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{monomial}")?;
            } else {
                write!(f, "{a}*{monomial}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn half_q2_minus_q() -> RationalPoly {
        RationalPoly::from_coeffs(vec![rat(0, 1), rat(-1, 2), rat(1, 2)])
    }

    #[test]
    fn binomial_of_q_choose_two() {
        assert_eq!(poly_binomial(&RationalPoly::q(), 2), half_q2_minus_q());
    }

    #[test]
    fn binomial_with_r_one_is_identity() {
        assert_eq!(poly_binomial(&half_q2_minus_q(), 1), half_q2_minus_q());
        assert_eq!(poly_binomial(&half_q2_minus_q(), 0), RationalPoly::one());
    }

    #[test]
    fn binomial_of_quadratic_choose_two() {
        // (q^4 - 2q^3 - q^2 + 2q)/8
        let expected = RationalPoly::from_coeffs(vec![
            rat(0, 1),
            rat(2, 8),
            rat(-1, 8),
            rat(-2, 8),
            rat(1, 8),
        ]);
        let got = poly_binomial(&half_q2_minus_q(), 2);
        assert_eq!(got, expected);
        assert_eq!(got.degree(), Some(4));
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(half_q2_minus_q().to_string(), "1/2*q^2 - 1/2*q");
        assert_eq!(RationalPoly::zero().to_string(), "0");
        assert_eq!(RationalPoly::from_integers(&[-1, 0, 1]).to_string(), "q^2 - 1");
    }

    fn exact_binomial(n: i64, r: u32) -> i64 {
        if n < r as i64 {
            return 0;
        }
        (0..r as i64).fold(1, |acc, j| acc * (n - j) / (j + 1))
    }

    #[test]
    fn binomial_agrees_with_integer_binomials_on_a_grid() {
        let polys = [
            RationalPoly::q(),
            half_q2_minus_q(),
            RationalPoly::from_coeffs(vec![rat(0, 1), rat(-1, 3), rat(0, 1), rat(1, 3)]),
            RationalPoly::from_integers(&[1, 1]),
        ];
        for p in &polys {
            for r in 0..5u32 {
                let b = poly_binomial(p, r);
                assert_eq!(b.degree().unwrap_or(0), r as usize * p.degree().unwrap());
                for q in 0..12i64 {
                    let v = p.eval_integer(&q.into());
                    assert!(v.is_integer());
                    let v = v.to_integer();
                    if v.is_negative() {
                        continue;
                    }
                    let v: i64 = v.try_into().unwrap();
                    assert_eq!(
                        b.eval_integer(&q.into()),
                        Rational::from_integer(exact_binomial(v, r).into()),
                        "P = {p}, r = {r}, q = {q}"
                    );
                }
            }
        }
    }
}
