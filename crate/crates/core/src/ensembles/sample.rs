use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::parse_int_poly;
use crate::error::{Error, Result};
use crate::nf::{FieldElement, NumberField};

/// Largest sample space accepted by [`SampleSource::Exhaustive`].
pub const EXHAUSTIVE_BUDGET: u64 = 10_000_000;

/// A monic polynomial `X^n + alpha_{n-1} X^{n-1} + ... + alpha_0` over
/// `O_K` with every coordinate of every `alpha_k` in `[-N, N]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolynomialSample {
    coeffs: Vec<FieldElement>,
    height_bound: u64,
}

impl PolynomialSample {
    /// `coeffs` are `alpha_0, ..., alpha_{n-1}`; the leading 1 is implicit.
    pub fn new(coeffs: Vec<FieldElement>, height_bound: u64) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter("polynomial degree must be >= 1".into()));
        }
        let bound = BigInt::from(height_bound);
        if coeffs.iter().any(|a| a.height() > bound) {
            return Err(Error::InvalidParameter(format!(
                "coefficient height exceeds the bound {height_bound}"
            )));
        }
        Ok(PolynomialSample { coeffs, height_bound })
    }

    /// A fixed polynomial; its height bound is its own height.
    pub fn fixed(coeffs: Vec<FieldElement>) -> Result<Self> {
        let h = coeffs.iter().map(|a| a.height()).max().unwrap_or_default();
        let h = h.to_u64().ok_or_else(|| Error::InvalidParameter("height does not fit in 64 bits".into()))?;
        Self::new(coeffs, h)
    }

    /// Parse either a coefficient list `[a0, a1, ...]` of field elements
    /// (`alpha_0` first, each an integer or a tuple `(c0,c1,..)`), or a monic
    /// integer polynomial in `x` such as `x^3 - x - 1`.
    pub fn parse(field: &NumberField, text: &str) -> Result<Self> {
        let t = text.trim();
        if let Some(body) = t.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let coeffs = split_top_level(body)
                .into_iter()
                .map(|s| field.parse_element(s))
                .collect::<Result<Vec<_>>>()?;
            return Self::fixed(coeffs);
        }
        let ints = parse_int_poly(t)?;
        let n = ints.len() - 1;
        if n == 0 || !ints[n].is_one() {
            return Err(Error::Parse {
                what: "polynomial",
                input: text.to_string(),
                msg: "expected a monic polynomial of degree >= 1".into(),
            });
        }
        Self::fixed(ints[..n].iter().map(|c| field.integer(c.clone())).collect())
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    /// `alpha_0, ..., alpha_{n-1}`.
    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn height_bound(&self) -> u64 {
        self.height_bound
    }

    pub fn height(&self) -> BigInt {
        self.coeffs.iter().map(|a| a.height()).max().unwrap_or_default()
    }

    /// All coefficients including the leading 1, lowest first.
    pub fn full_coeffs(&self, field: &NumberField) -> Vec<FieldElement> {
        let mut v = self.coeffs.clone();
        v.push(field.one());
        v
    }

    /// `f(lambda)`.
    pub fn eval(&self, field: &NumberField, lambda: &FieldElement) -> FieldElement {
        self.coeffs
            .iter()
            .rev()
            .fold(field.one(), |acc, c| field.mul(&acc, lambda).add(c))
    }

    /// Integer coefficients (lowest first, leading 1 included) when `K = Q`.
    pub fn integer_coeffs(&self) -> Option<Vec<BigInt>> {
        if self.coeffs.iter().any(|a| a.degree() != 1) {
            return None;
        }
        let mut v: Vec<BigInt> = self.coeffs.iter().map(|a| a.coords()[0].clone()).collect();
        v.push(BigInt::one());
        Some(v)
    }
}

/// `[a0,a1,...]` with `alpha_0` first.
impl fmt::Display for PolynomialSample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

fn split_top_level(body: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in body.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&body[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    if !body[start..].trim().is_empty() {
        out.push(&body[start..]);
    }
    out
}

/// The RNG stream for one sample: ChaCha8 keyed by `seed`, stream `index`.
pub fn stream_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Draw `alpha_0 .. alpha_{n-1}` with all `n d` coordinates independent and
/// uniform on `[-N, N]`, in order `alpha_0` first, coordinate 0 first.
pub fn sample<R: Rng + ?Sized>(field: &NumberField, n: usize, bound: u64, rng: &mut R) -> PolynomialSample {
    assert!(n >= 1 && bound >= 1, "need n >= 1 and N >= 1");
    let b = bound as i64;
    let coeffs = (0..n)
        .map(|_| {
            let coords: Vec<BigInt> = (0..field.degree()).map(|_| BigInt::from(rng.gen_range(-b..=b))).collect();
            field.element(coords).expect("degree-many coordinates")
        })
        .collect();
    PolynomialSample {
        coeffs,
        height_bound: bound,
    }
}

/// Where an ensemble's polynomials come from. Samples are addressed by
/// index so they can be produced in parallel and collated in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum SampleSource {
    /// `samples` independent draws; sample `i` uses `stream_rng(seed, i)`.
    Random { samples: u64, seed: u64 },
    /// Every polynomial of height at most `N`, in mixed-radix order.
    Exhaustive,
    /// A single given polynomial.
    Fixed { poly: PolynomialSample },
}

impl SampleSource {
    pub fn len(&self, field: &NumberField, n: usize, bound: u64) -> Result<u64> {
        match self {
            SampleSource::Random { samples, .. } => Ok(*samples),
            SampleSource::Fixed { .. } => Ok(1),
            SampleSource::Exhaustive => {
                let digits = (n * field.degree()) as u32;
                (2 * bound + 1)
                    .checked_pow(digits)
                    .filter(|&t| t <= EXHAUSTIVE_BUDGET)
                    .ok_or_else(|| Error::BudgetExceeded {
                        size: format!("(2*{bound}+1)^{digits} polynomials"),
                        budget: EXHAUSTIVE_BUDGET,
                    })
            }
        }
    }

    pub fn is_empty(&self, field: &NumberField, n: usize, bound: u64) -> Result<bool> {
        Ok(self.len(field, n, bound)? == 0)
    }

    /// The `index`-th polynomial.
    pub fn get(&self, field: &NumberField, n: usize, bound: u64, index: u64) -> PolynomialSample {
        match self {
            SampleSource::Random { seed, .. } => sample(field, n, bound, &mut stream_rng(*seed, index)),
            SampleSource::Fixed { poly } => poly.clone(),
            SampleSource::Exhaustive => {
                let radix = 2 * bound + 1;
                let mut i = index;
                let coeffs = (0..n)
                    .map(|_| {
                        let coords = (0..field.degree())
                            .map(|_| {
                                let digit = i % radix;
                                i /= radix;
                                BigInt::from(digit as i64 - bound as i64)
                            })
                            .collect();
                        field.element(coords).expect("degree-many coordinates")
                    })
                    .collect();
                PolynomialSample {
                    coeffs,
                    height_bound: bound,
                }
            }
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            SampleSource::Random { seed, .. } => Some(*seed),
            _ => None,
        }
    }

    pub fn mode_name(&self) -> &'static str {
        match self {
            SampleSource::Random { .. } => "random",
            SampleSource::Exhaustive => "exhaustive",
            SampleSource::Fixed { .. } => "fixed",
        }
    }
}

/// Whether the integer polynomial (lowest first) has a rational root.
pub fn has_rational_root(coeffs: &[BigInt]) -> bool {
    let c0 = &coeffs[0];
    if c0.is_zero() {
        return true;
    }
    let bound = c0.abs().to_u64().unwrap_or(u64::MAX);
    let eval = |x: &BigInt| coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c);
    (1..=bound.min(1_000_000))
        .filter(|d| (c0 % BigInt::from(*d)).is_zero())
        .any(|d| eval(&BigInt::from(d)).is_zero() || eval(&-BigInt::from(d)).is_zero())
}
