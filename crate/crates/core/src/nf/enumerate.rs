use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::field::{FieldElement, NumberField};
use crate::error::{Error, Result};

/// Largest norm bound accepted by [`NumberField::elements_up_to_norm`].
pub const MAX_NORM_BOUND: u64 = 100_000_000;

/// How elements of bounded norm are listed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnumerationMode {
    /// One representative per orbit under the torsion units.
    #[default]
    UnitOrbits,
    /// Every nonzero element.
    AllUnits,
}

impl fmt::Display for EnumerationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EnumerationMode::UnitOrbits => "unit-orbits",
            EnumerationMode::AllUnits => "all-units",
        })
    }
}

impl FromStr for EnumerationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit-orbits" | "orbits" => Ok(EnumerationMode::UnitOrbits),
            "all-units" | "all" => Ok(EnumerationMode::AllUnits),
            _ => Err(Error::Parse {
                what: "enumeration mode",
                input: s.to_string(),
                msg: "expected unit-orbits or all-units".into(),
            }),
        }
    }
}

/// Nonzero `(x, y)` with `x^2 - b x y + c y^2 <= m`, the norm form of
/// `x + y theta` for `theta^2 + b theta + c = 0`; requires `b^2 < 4c`.
///
/// Scans `|y| <= sqrt(4m/|D|)` and, per row, the `x` with
/// `(2x - b y)^2 <= 4m - |D| y^2`.
pub fn quadratic_form_points(b: i64, c: i64, m: u64) -> Vec<(i64, i64)> {
    let (b, c, m) = (b as i128, c as i128, m as i128);
    let abs_d = 4 * c - b * b;
    assert!(abs_d > 0, "norm form must be positive definite");
    let ymax = isqrt(4 * m / abs_d);
    let mut out = Vec::new();
    for y in -ymax..=ymax {
        let rest = 4 * m - abs_d * y * y;
        if rest < 0 {
            continue;
        }
        let s = isqrt(rest);
        // (2x - b y) in [-s, s]
        let lo = (b * y - s).div_euclid(2) - 1;
        let hi = (b * y + s).div_euclid(2) + 1;
        for x in lo..=hi {
            let n = x * x - b * x * y + c * y * y;
            if n <= m && (x, y) != (0, 0) {
                out.push((x as i64, y as i64));
            }
        }
    }
    out
}

fn isqrt(n: i128) -> i128 {
    if n <= 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Whether `x + y theta` lies in the fixed fundamental sector for `w`
/// torsion units: arguments in `[0, 2 pi / w)`, using `2 Re = 2x - b y`
/// and `Im` proportional to `y`.
fn in_canonical_sector(b: i64, c: i64, w: usize, x: i64, y: i64) -> bool {
    let (b, c, x, y) = (b as i128, c as i128, x as i128, y as i128);
    let re2 = 2 * x - b * y;
    let abs_d = 4 * c - b * b;
    match w {
        2 => y > 0 || (y == 0 && x > 0),
        4 => re2 > 0 && y >= 0,
        // arg < pi/3  <=>  Im < sqrt(3) Re  <=>  |D| y^2 < 3 (2 Re)^2
        6 => re2 > 0 && y >= 0 && abs_d * y * y < 3 * re2 * re2,
        _ => unreachable!("imaginary quadratic orders have 2, 4 or 6 roots of unity"),
    }
}

impl NumberField {
    /// Nonzero elements of norm at most `m`, sorted by (norm, coordinates).
    /// Only for `Q` and imaginary quadratic fields. For `Q` the unit-orbit
    /// mode gives `1..=m`.
    pub fn elements_up_to_norm(&self, m: u64, mode: EnumerationMode) -> Result<Vec<FieldElement>> {
        if !self.unit_group_finite() {
            return Err(Error::UnsupportedField(format!(
                "{} has an infinite unit group; norm-bounded enumeration needs Q or an imaginary quadratic field",
                self.spec()
            )));
        }
        if m > MAX_NORM_BOUND {
            return Err(Error::BudgetExceeded {
                size: format!("norm bound {m}"),
                budget: MAX_NORM_BOUND,
            });
        }
        if self.is_rational() {
            let m = m as i64;
            let values: Vec<i64> = match mode {
                EnumerationMode::UnitOrbits => (1..=m).collect(),
                EnumerationMode::AllUnits => (1..=m).flat_map(|a| [-a, a]).collect(),
            };
            return Ok(values.into_iter().map(|a| self.integer(BigInt::from(a))).collect());
        }
        let (b, c) = self.quadratic_coefficients()?;
        let w = self.torsion_units().len();
        let mut points: Vec<(i128, i64, i64)> = quadratic_form_points(b, c, m)
            .into_iter()
            .filter(|&(x, y)| mode == EnumerationMode::AllUnits || in_canonical_sector(b, c, w, x, y))
            .map(|(x, y)| {
                let (xi, yi) = (x as i128, y as i128);
                (xi * xi - b as i128 * xi * yi + c as i128 * yi * yi, x, y)
            })
            .collect();
        points.sort_unstable();
        Ok(points.into_iter().map(|(_, x, y)| self.element_i64(&[x, y])).collect())
    }
}
