use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Factorization pattern `(r_1, ..., r_n)` of a squarefree degree-n
/// polynomial over a finite field: `r_k` irreducible factors of degree `k`,
/// with `sum k * r_k = n`. Equivalently a cycle type in `S_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct SplittingType(Vec<u32>);

impl SplittingType {
    pub fn new(counts: Vec<u32>) -> Result<Self> {
        let n = counts.len();
        if n == 0 {
            return Err(Error::InvalidParameter("splitting type of degree 0".into()));
        }
        let total: u64 = counts
            .iter()
            .enumerate()
            .map(|(i, &r)| (i as u64 + 1) * r as u64)
            .sum();
        if total != n as u64 {
            return Err(Error::InvalidParameter(format!(
                "splitting type {:?} has weight {total}, expected {n}",
                counts
            )));
        }
        Ok(SplittingType(counts))
    }

    /// Type of a polynomial of degree `n` whose irreducible factors have the
    /// given degrees.
    pub fn from_degrees(n: usize, degrees: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut counts = vec![0u32; n];
        for d in degrees {
            if d == 0 || d > n {
                return Err(Error::InvalidParameter(format!("factor degree {d} out of range for n = {n}")));
            }
            counts[d - 1] += 1;
        }
        Self::new(counts)
    }

    /// Type from a partition of `n` given as its parts.
    pub fn from_partition(parts: &[usize]) -> Result<Self> {
        Self::from_degrees(parts.iter().sum(), parts.iter().copied())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// `r_k` for `1 <= k <= n`, zero outside that range.
    pub fn count(&self, k: usize) -> u32 {
        if k == 0 {
            return 0;
        }
        self.0.get(k - 1).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    /// Parts of the partition, decreasing.
    pub fn parts(&self) -> Vec<usize> {
        let mut parts = Vec::new();
        for k in (1..=self.degree()).rev() {
            for _ in 0..self.count(k) {
                parts.push(k);
            }
        }
        parts
    }

    pub fn is_n_cycle(&self) -> bool {
        self.count(self.degree()) == 1
    }

    /// One fixed point and one (n-1)-cycle (n >= 3).
    pub fn is_n_minus_one_cycle(&self) -> bool {
        let n = self.degree();
        n >= 3 && self.count(n - 1) == 1 && self.count(1) == 1
    }

    /// One 2-cycle and n-2 fixed points (n >= 2).
    pub fn is_transposition(&self) -> bool {
        let n = self.degree();
        n >= 2 && self.count(2) == 1 && self.count(1) as usize == n - 2
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "{}", s.join(","))
    }
}

impl FromStr for SplittingType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let counts = s
            .split(',')
            .map(|t| t.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse {
                what: "splitting type",
                input: s.to_string(),
                msg: e.to_string(),
            })?;
        Self::new(counts)
    }
}

impl TryFrom<Vec<u32>> for SplittingType {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<SplittingType> for Vec<u32> {
    fn from(t: SplittingType) -> Vec<u32> {
        t.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let t: SplittingType = "1,1,0".parse().unwrap();
        assert_eq!(t.to_string(), "1,1,0");
        assert_eq!(t.parts(), vec![2, 1]);
        assert!(t.is_transposition());
        assert!(t.is_n_minus_one_cycle());
        assert!("1,1".parse::<SplittingType>().is_err());
        assert!("a".parse::<SplittingType>().is_err());
    }

    #[test]
    fn witness_shapes() {
        let t = SplittingType::from_partition(&[4]).unwrap();
        assert!(t.is_n_cycle() && !t.is_transposition());
        let t = SplittingType::from_partition(&[3, 1]).unwrap();
        assert!(t.is_n_minus_one_cycle());
        let t = SplittingType::from_partition(&[2, 1, 1]).unwrap();
        assert!(t.is_transposition());
        let t = SplittingType::from_partition(&[2, 2]).unwrap();
        assert!(!t.is_transposition());
    }
}
