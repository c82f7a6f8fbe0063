use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use super::{fmt_f64, ExperimentReport};
use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::nf::{ideal_factorization, EnumerationMode, FieldElement, IdealHnf, LcmAccumulator, NumberField};
use crate::splitting::to_f64;

/// Imaginary quadratic fields of class number one, by discriminant.
const CLASS_NUMBER_ONE: [i64; 9] = [-3, -4, -7, -8, -11, -19, -43, -67, -163];

/// Largest `|N(nu)|` whose residues are enumerated.
const RESIDUE_BUDGET: u64 = 1_000_000;

/// One orbit of `(O_K/nu)^*` under the torsion units.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RayClass {
    /// Smallest residue in the orbit (coordinates reduced by the ideal).
    pub representative: FieldElement,
    pub size: usize,
    /// Smallest `|N(beta)|` over nonzero `beta` in the class.
    pub min_norm: u64,
}

/// Ray classes modulo a principal `nu` in a class-number-one field with
/// finitely many units.
#[derive(Debug, Clone, Serialize)]
pub struct RayClassData {
    pub modulus: FieldElement,
    pub modulus_norm: u64,
    /// `|(O_K/nu)^*|`.
    pub unit_residues: usize,
    /// `h_nu`, the orbit count.
    pub h: usize,
    pub classes: Vec<RayClass>,
    /// `(1/h) sum_c 1/N_c`, exact.
    #[serde(serialize_with = "ser_rational")]
    pub constant: Rational,
    #[serde(skip)]
    ideal: IdealHnf,
    #[serde(skip)]
    lookup: BTreeMap<Vec<BigInt>, usize>,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl RayClassData {
    /// Index into `classes` of the class of `e`.
    pub fn class_of(&self, e: &FieldElement) -> Result<usize> {
        self.lookup
            .get(&self.ideal.reduce(e))
            .copied()
            .ok_or_else(|| Error::NonCoprimeResidue(e.to_string()))
    }

    pub fn constant_f64(&self) -> f64 {
        to_f64(&self.constant)
    }
}

fn check_supported(field: &NumberField) -> Result<()> {
    if field.is_rational() {
        return Ok(());
    }
    let disc = field.discriminant().to_i64();
    if field.is_imaginary_quadratic() && disc.is_some_and(|d| CLASS_NUMBER_ONE.contains(&d)) {
        return Ok(());
    }
    Err(Error::UnsupportedField(format!(
        "{}: ray classes need Q or an imaginary quadratic field of class number one",
        field.spec()
    )))
}

fn abs_norm(field: &NumberField, e: &FieldElement) -> BigInt {
    field.norm(e).abs()
}

fn coprime(field: &NumberField, a: &FieldElement, b: &FieldElement) -> bool {
    IdealHnf::from_generators(field, &[a.clone(), b.clone()]).is_some_and(|i| i.is_unit())
}

/// Orbits of `(O_K/nu)^*` under the torsion units, with the least norm in
/// each class found by scanning elements in increasing norm.
pub fn ray_class_data(field: &NumberField, nu: &FieldElement) -> Result<RayClassData> {
    check_supported(field)?;
    if nu.is_zero() {
        return Err(Error::InvalidParameter("modulus must be nonzero".into()));
    }
    let modulus_norm = abs_norm(field, nu)
        .to_u64()
        .filter(|&n| n <= RESIDUE_BUDGET)
        .ok_or_else(|| Error::BudgetExceeded {
            size: format!("residues modulo {nu}"),
            budget: RESIDUE_BUDGET,
        })?;
    if modulus_norm == 1 {
        return Err(Error::InvalidParameter(format!("modulus {nu} is a unit")));
    }
    let ideal = IdealHnf::principal(field, nu).expect("nonzero modulus");
    let diag: Vec<u64> = (0..field.degree())
        .map(|i| ideal.rows()[i][i].to_u64().expect("bounded by the norm"))
        .collect();

    // every box vector with 0 <= c_i < h_ii is already reduced
    let mut residues = Vec::new();
    for mut index in 0..modulus_norm {
        let coords = diag
            .iter()
            .map(|&h| {
                let c = index % h;
                index /= h;
                BigInt::from(c)
            })
            .collect();
        let e = field.element(coords)?;
        if coprime(field, &e, nu) {
            residues.push(e);
        }
    }

    let mut lookup: BTreeMap<Vec<BigInt>, usize> = BTreeMap::new();
    let mut orbits: Vec<BTreeSet<FieldElement>> = Vec::new();
    for c in &residues {
        if lookup.contains_key(c.coords()) {
            continue;
        }
        let orbit: BTreeSet<FieldElement> = field
            .torsion_units()
            .iter()
            .map(|u| field.element(ideal.reduce(&field.mul(u, c))).expect("degree-many coordinates"))
            .collect();
        for member in &orbit {
            lookup.insert(member.coords().to_vec(), orbits.len());
        }
        orbits.push(orbit);
    }
    // order classes by representative and renumber
    let mut order: Vec<usize> = (0..orbits.len()).collect();
    order.sort_by(|&a, &b| orbits[a].first().cmp(&orbits[b].first()));
    let mut renumber = vec![0; orbits.len()];
    for (new, &old) in order.iter().enumerate() {
        renumber[old] = new;
    }
    for v in lookup.values_mut() {
        *v = renumber[*v];
    }
    let h = orbits.len();

    let mut min_norm: Vec<Option<u64>> = vec![None; h];
    let mut bound = modulus_norm.max(4);
    while min_norm.iter().any(Option::is_none) {
        for beta in field.elements_up_to_norm(bound, EnumerationMode::AllUnits)? {
            if let Some(&class) = lookup.get(&ideal.reduce(&beta)) {
                if min_norm[class].is_none() {
                    min_norm[class] = abs_norm(field, &beta).to_u64();
                }
            }
        }
        bound *= 2;
    }

    let classes: Vec<RayClass> = order
        .iter()
        .zip(&min_norm)
        .map(|(&old, n)| RayClass {
            representative: orbits[old].first().expect("nonempty orbit").clone(),
            size: orbits[old].len(),
            min_norm: n.expect("filled above"),
        })
        .collect();
    let sum: Rational = classes
        .iter()
        .map(|c| Rational::new(BigInt::one(), BigInt::from(c.min_norm)))
        .sum();
    let constant = sum / Rational::from_integer(BigInt::from(h));
    Ok(RayClassData {
        modulus: nu.clone(),
        modulus_norm,
        unit_residues: residues.len(),
        h,
        classes,
        constant,
        ideal,
        lookup,
    })
}

/// `(k/phi(k)) sum_{m <= k, (m,k) = 1} 1/m`, the growth constant of
/// `log lcm(k j + h : j <= M)` over the integers.
pub fn bks_constant(k: u64) -> Rational {
    let units: Vec<u64> = (1..=k).filter(|m| m.gcd(&k) == 1).collect();
    let sum: Rational = units
        .iter()
        .map(|&m| Rational::new(BigInt::one(), BigInt::from(m)))
        .sum();
    sum * Rational::new(BigInt::from(k), BigInt::from(units.len()))
}

/// Linear polynomial `f(X) = nu X + alpha` and the bounds `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearParams {
    pub alpha: FieldElement,
    pub nu: FieldElement,
    pub ms: Vec<u64>,
}

fn log_lcm(field: &NumberField, values: &[FieldElement]) -> Result<f64> {
    let parts = values
        .par_chunks(512)
        .map(|chunk| {
            let mut acc = LcmAccumulator::new();
            for v in chunk {
                let factors = ideal_factorization(field, v).map_err(|e| Error::AtElement {
                    lambda: v.to_string(),
                    source: Box::new(e),
                })?;
                acc.accumulate_factorization(&factors);
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut acc = LcmAccumulator::new();
    for part in &parts {
        acc.merge(part);
    }
    Ok(acc.log_norm())
}

/// Distinct values `eta alpha + nu lambda` of norm at most `m`, over every
/// torsion unit `eta` and every `lambda` (zero included) of norm at most
/// `(sqrt m + sqrt N(alpha))^2 / N(nu)`.
fn ray_values(field: &NumberField, alpha: &FieldElement, nu: &FieldElement, m: u64) -> Result<Vec<FieldElement>> {
    let na = abs_norm(field, alpha).to_f64().unwrap_or(f64::INFINITY);
    let nn = abs_norm(field, nu).to_f64().unwrap_or(f64::INFINITY);
    let bound = (((m as f64).sqrt() + na.sqrt()).powi(2) / nn).ceil() as u64;
    let mut lambdas = field.elements_up_to_norm(bound, EnumerationMode::AllUnits)?;
    lambdas.push(field.zero());
    let limit = BigInt::from(m);
    let mut values = BTreeSet::new();
    for eta in field.torsion_units() {
        let base = field.mul(eta, alpha);
        for lambda in &lambdas {
            let beta = base.add(&field.mul(nu, lambda));
            if !beta.is_zero() && abs_norm(field, &beta) <= limit {
                values.insert(beta);
            }
        }
    }
    Ok(values.into_iter().collect())
}

/// The degree-one case: `log |N lcm|` of the values of `nu X + alpha`
/// against `M (1/h_nu) sum_c 1/N_c`, and over `Q` also the classical form
/// `log lcm(k j + h : 1 <= j <= M)` against [`bks_constant`].
pub fn run_linear_case(field: &NumberField, params: &LinearParams) -> Result<ExperimentReport> {
    let start = Instant::now();
    check_supported(field)?;
    let (alpha, nu) = (&params.alpha, &params.nu);
    if nu.is_zero() {
        return Err(Error::InvalidParameter("nu must be nonzero".into()));
    }
    if !coprime(field, alpha, nu) {
        return Err(Error::NonCoprimeResidue(format!("alpha = {alpha} modulo nu = {nu}")));
    }
    let mut ms = params.ms.clone();
    ms.sort_unstable();
    ms.dedup();
    if ms.is_empty() || ms[0] == 0 {
        return Err(Error::InvalidParameter("need at least one M >= 1".into()));
    }
    let params_json = serde_json::json!({
        "field": field.spec(),
        "alpha": alpha.to_string(),
        "nu": nu.to_string(),
        "M": ms,
    });
    let mut report = ExperimentReport::new(
        "linear",
        params_json,
        &["form", "M", "values", "log_lcm", "slope", "constant", "ratio"],
    );

    let nu_is_unit = abs_norm(field, nu).is_one();
    if nu_is_unit {
        report
            .warnings
            .push(format!("nu = {nu} is a unit: no ray classes; only the integer form is reported"));
    } else {
        let ray = ray_class_data(field, nu)?;
        let constant = ray.constant_f64();
        report.set("h", ray.h);
        report.set("unit_residues", ray.unit_residues);
        report.set("ray_constant", ray.constant.to_string());
        report.set(
            "classes",
            Value::Array(
                ray.classes
                    .iter()
                    .map(|c| {
                        serde_json::json!({
                            "representative": c.representative.to_string(),
                            "size": c.size,
                            "min_norm": c.min_norm,
                        })
                    })
                    .collect(),
            ),
        );
        for &m in &ms {
            let values = ray_values(field, alpha, nu, m)?;
            let log = log_lcm(field, &values)?;
            let slope = log / m as f64;
            if m == *ms.last().unwrap() {
                report.set_f64("ray_slope", slope);
                report.set_f64("ray_ratio", slope / constant);
            }
            report.push_row(vec![
                "ray".into(),
                m.to_string(),
                values.len().to_string(),
                fmt_f64(log),
                fmt_f64(slope),
                fmt_f64(constant),
                fmt_f64(slope / constant),
            ]);
        }
    }

    if field.is_rational() {
        let k = nu.coords()[0].abs();
        let h = &alpha.coords()[0] * nu.coords()[0].signum();
        let k_u64 = k.to_u64().ok_or_else(|| Error::InvalidParameter("k does not fit in 64 bits".into()))?;
        let bks = bks_constant(k_u64);
        let constant = to_f64(&bks);
        report.set("bks_constant", bks.to_string());
        for &m in &ms {
            let values: Vec<FieldElement> = (1..=m)
                .map(|j| field.integer(&k * BigInt::from(j) + &h))
                .filter(|v| !v.is_zero())
                .collect();
            let log = log_lcm(field, &values)?;
            let slope = log / m as f64;
            if m == *ms.last().unwrap() {
                report.set_f64("bks_slope", slope);
                report.set_f64("bks_ratio", slope / constant);
            }
            report.push_row(vec![
                "bks".into(),
                m.to_string(),
                values.len().to_string(),
                fmt_f64(log),
                fmt_f64(slope),
                fmt_f64(constant),
                fmt_f64(slope / constant),
            ]);
        }
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn euler_phi(k: u64) -> u64 {
        (1..=k).filter(|m| m.gcd(&k) == 1).count() as u64
    }

    #[test]
    fn rational_classes() {
        let q = NumberField::rationals();
        for k in 2..=30u64 {
            let data = ray_class_data(&q, &q.integer(BigInt::from(k))).unwrap();
            let phi = euler_phi(k);
            assert_eq!(data.unit_residues as u64, phi);
            assert_eq!(data.h as u64, if k <= 2 { 1 } else { phi / 2 }, "k={k}");
            // independent: average of 1/min(c, k-c) over (Z/k)^*
            let direct: Rational = (1..k)
                .filter(|c| c.gcd(&k) == 1)
                .map(|c| Rational::new(BigInt::one(), BigInt::from(c.min(k - c))))
                .sum::<Rational>()
                / Rational::from_integer(BigInt::from(phi));
            assert_eq!(data.constant, direct, "k={k}");
        }
    }

    #[test]
    fn quadratic_examples() {
        let eis = NumberField::parse("x^2+x+1").unwrap();
        let data = ray_class_data(&eis, &eis.integer(BigInt::from(2))).unwrap();
        assert_eq!(data.unit_residues, 3);
        assert_eq!(data.h, 1);
        assert_eq!(data.constant, Rational::one());

        let gauss = NumberField::parse("x^2+1").unwrap();
        let data = ray_class_data(&gauss, &gauss.element_i64(&[1, 1])).unwrap();
        assert_eq!((data.unit_residues, data.h), (1, 1));

        // (Z[i]/3)^* = F_9^* of order 8, units act freely: 2 classes
        let data = ray_class_data(&gauss, &gauss.integer(BigInt::from(3))).unwrap();
        assert_eq!((data.unit_residues, data.h), (8, 2));
        let norms: Vec<u64> = data.classes.iter().map(|c| c.min_norm).collect();
        assert_eq!(norms, vec![1, 2]);
    }

    #[test]
    fn non_coprime_residue() {
        let q = NumberField::rationals();
        let data = ray_class_data(&q, &q.integer(BigInt::from(6))).unwrap();
        assert!(matches!(data.class_of(&q.integer(BigInt::from(4))), Err(Error::NonCoprimeResidue(_))));
        assert_eq!(data.class_of(&q.integer(BigInt::from(-1))).unwrap(), 0);
    }

    #[test]
    fn unsupported_fields() {
        let k = NumberField::parse("x^2+5").unwrap();
        assert!(matches!(
            ray_class_data(&k, &k.integer(BigInt::from(2))),
            Err(Error::UnsupportedField(_))
        ));
    }

    #[test]
    fn bks_values() {
        assert_eq!(bks_constant(1), Rational::one());
        assert_eq!(bks_constant(3), Rational::new(BigInt::from(9), BigInt::from(4)));
    }

    #[test]
    fn identity_polynomial_is_lcm_of_integers() {
        let q = NumberField::rationals();
        let params = LinearParams {
            alpha: q.zero(),
            nu: q.one(),
            ms: vec![10],
        };
        let rep = run_linear_case(&q, &params).unwrap();
        let log: f64 = rep.column("log_lcm").unwrap()[0].parse().unwrap();
        assert!((log - 2520f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn ray_values_cover_the_residue_class() {
        // Q, nu = 3, alpha = 1: every integer prime to 3 with |b| <= 20, signs included
        let q = NumberField::rationals();
        let vals = ray_values(&q, &q.one(), &q.integer(BigInt::from(3)), 20).unwrap();
        let expect: Vec<i64> = (-20..=20i64).filter(|b| b.rem_euclid(3) != 0).collect();
        let got: Vec<i64> = vals.iter().map(|v| v.coords()[0].to_i64().unwrap()).collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn rejects_non_coprime() {
        let q = NumberField::rationals();
        let params = LinearParams {
            alpha: q.integer(BigInt::from(3)),
            nu: q.integer(BigInt::from(6)),
            ms: vec![10],
        };
        assert!(matches!(run_linear_case(&q, &params), Err(Error::NonCoprimeResidue(_))));
    }
}
