use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::field::{FieldElement, NumberField};
use super::linalg::hermite_normal_form;
use super::prime::PrimeIdeal;

/// Nonzero ideal of `Z[theta]` as the upper-triangular Hermite basis of its
/// lattice in power-basis coordinates: row `i` is zero before column `i`,
/// the diagonal is positive and entries above it are reduced modulo the
/// diagonal entry of their column.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IdealHnf {
    rows: Vec<Vec<BigInt>>,
}

impl IdealHnf {
    /// The whole ring.
    pub fn unit(d: usize) -> Self {
        let rows = (0..d)
            .map(|i| (0..d).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        IdealHnf { rows }
    }

    /// Ideal generated by `gens` (not all zero).
    pub fn from_generators(field: &NumberField, gens: &[FieldElement]) -> Option<Self> {
        let theta = field.theta();
        let mut lattice = Vec::with_capacity(gens.len() * field.degree());
        for g in gens {
            let mut cur = g.clone();
            for j in 0..field.degree() {
                if j > 0 {
                    cur = field.mul(&cur, &theta);
                }
                lattice.push(cur.coords().to_vec());
            }
        }
        hermite_normal_form(field.degree(), lattice).map(|rows| IdealHnf { rows })
    }

    /// Principal ideal of a nonzero element.
    pub fn principal(field: &NumberField, e: &FieldElement) -> Option<Self> {
        Self::from_generators(field, std::slice::from_ref(e))
    }

    /// `P = (p, h(theta))`.
    pub fn prime(field: &NumberField, ideal: &PrimeIdeal) -> Self {
        let p = field.integer(BigInt::from(ideal.p()));
        let h = field.reduce_poly(ideal.local_factor().iter().map(|&c| BigInt::from(c)).collect());
        Self::from_generators(field, &[p, h]).expect("prime ideals are nonzero")
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn degree(&self) -> usize {
        self.rows.len()
    }

    /// Index in `Z[theta]`: the product of the diagonal.
    pub fn norm(&self) -> BigInt {
        (0..self.rows.len()).map(|i| &self.rows[i][i]).product()
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    pub fn mul(&self, field: &NumberField, other: &IdealHnf) -> IdealHnf {
        let d = self.degree();
        let mut gens = Vec::with_capacity(d * d + d);
        let a: Vec<FieldElement> = self.rows.iter().map(|r| field.element(r.clone()).unwrap()).collect();
        let b: Vec<FieldElement> = other.rows.iter().map(|r| field.element(r.clone()).unwrap()).collect();
        for x in &a {
            for y in &b {
                gens.push(field.mul(x, y).into_coords());
            }
        }
        // N(I) N(J) lies in IJ; adding it keeps the entries small
        let n = self.norm() * other.norm();
        for i in 0..d {
            let mut v = vec![BigInt::zero(); d];
            v[i] = n.clone();
            gens.push(v);
        }
        IdealHnf {
            rows: hermite_normal_form(d, gens).expect("product of nonzero ideals"),
        }
    }

    pub fn pow(&self, field: &NumberField, mut k: u32) -> IdealHnf {
        let mut acc = IdealHnf::unit(self.degree());
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(field, &base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(field, &base);
            }
        }
        acc
    }

    /// `I + J`.
    pub fn add(&self, other: &IdealHnf) -> IdealHnf {
        let gens = self.rows.iter().chain(&other.rows).cloned().collect();
        IdealHnf {
            rows: hermite_normal_form(self.degree(), gens).expect("sum of nonzero ideals"),
        }
    }

    /// Canonical representative of `e` modulo the ideal: every coordinate
    /// `c_i` reduced into `[0, h_ii)`.
    pub fn reduce(&self, e: &FieldElement) -> Vec<BigInt> {
        let mut v = e.coords().to_vec();
        for (i, row) in self.rows.iter().enumerate() {
            let q = v[i].div_floor(&row[i]);
            if !q.is_zero() {
                for (x, y) in v.iter_mut().zip(row).skip(i) {
                    *x -= &q * y;
                }
            }
        }
        v
    }

    pub fn contains(&self, e: &FieldElement) -> bool {
        self.reduce(e).iter().all(Zero::is_zero)
    }

    /// `other` is a subset of `self`.
    pub fn contains_ideal(&self, field: &NumberField, other: &IdealHnf) -> bool {
        other
            .rows
            .iter()
            .all(|r| self.contains(&field.element(r.clone()).unwrap()))
    }
}
