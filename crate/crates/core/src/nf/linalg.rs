//! Integer linear algebra: fraction-free determinants and Hermite normal
//! forms of full-rank lattices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Determinant by Bareiss elimination; exact over the integers.
pub fn determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign {
        -det
    } else {
        det
    }
}

/// Upper-triangular Hermite normal form (row style) of the lattice spanned by
/// `gens` in `Z^d`: positive diagonal, entries above the diagonal reduced
/// into `[0, h_jj)`. `None` when the generators do not have rank `d`.
pub fn hermite_normal_form(d: usize, gens: Vec<Vec<BigInt>>) -> Option<Vec<Vec<BigInt>>> {
    let mut work: Vec<Vec<BigInt>> = gens
        .into_iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    let mut basis: Vec<Vec<BigInt>> = Vec::with_capacity(d);
    for col in 0..d {
        loop {
            let pivot = work
                .iter()
                .enumerate()
                .filter(|(_, r)| !r[col].is_zero())
                .min_by(|(_, a), (_, b)| a[col].abs().cmp(&b[col].abs()))
                .map(|(i, _)| i)?;
            let mut done = true;
            let prow = work[pivot].clone();
            for (i, row) in work.iter_mut().enumerate() {
                if i == pivot || row[col].is_zero() {
                    continue;
                }
                let q = &row[col] / &prow[col];
                for (x, y) in row.iter_mut().zip(&prow).skip(col) {
                    *x -= &q * y;
                }
                if !row[col].is_zero() {
                    done = false;
                }
            }
            if done {
                let mut row = work.swap_remove(pivot);
                if row[col].is_negative() {
                    row.iter_mut().for_each(|x| *x = -&*x);
                }
                basis.push(row);
                work.retain(|r| r.iter().any(|x| !x.is_zero()));
                break;
            }
        }
    }
    for j in 1..d {
        let (upper, lower) = basis.split_at_mut(j);
        let pivot = &lower[0];
        for row in upper.iter_mut() {
            let q = row[j].div_floor(&pivot[j]);
            if !q.is_zero() {
                for (x, y) in row.iter_mut().zip(pivot).skip(j) {
                    *x -= &q * y;
                }
            }
        }
    }
    Some(basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn determinant_small() {
        assert_eq!(determinant(m(&[&[2, 3], &[1, 4]])), BigInt::from(5));
        assert_eq!(determinant(m(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(
            determinant(m(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]])),
            BigInt::from(4)
        );
        assert_eq!(determinant(m(&[&[1, 2], &[2, 4]])), BigInt::zero());
    }

    #[test]
    fn hnf_of_small_lattice() {
        let h = hermite_normal_form(2, m(&[&[4, 6], &[2, 5], &[6, 0]])).unwrap();
        // index = gcd of the 2x2 minors 8, -36, -30
        assert_eq!(determinant(h.clone()), BigInt::from(2));
        assert!(h[1][0].is_zero());
        assert!(h[0][1] >= BigInt::zero() && h[0][1] < h[1][1]);
        assert!(hermite_normal_form(2, m(&[&[1, 2], &[2, 4]])).is_none());
    }
}
