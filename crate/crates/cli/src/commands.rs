use anyhow::{bail, Context, Result};
use clap::{Args, Subcommand};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use snlcm_core::ensembles::{certify_sn_with_primes, PolynomialSample, SampleSource, DEFAULT_PRIME_BUDGET};
use snlcm_core::experiments::{
    compute_psi, run_expectation_pi, run_indicator_moments, run_lemma11, run_linear_case, run_psi_ensemble,
    EnsembleParams, ExperimentReport, Lemma11Params, LinearParams, PrimeStatParams, PsiEnsembleParams, DEFAULT_XI,
};
use snlcm_core::nf::{EnumerationMode, NumberField};
use snlcm_core::splitting::{all_types, brute_force_census, c_r, census};
use snlcm_core::{Error, SplittingType};

/// Everything needed to rerun an experiment; stored verbatim in manifests.
#[derive(Subcommand, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Census polynomials of every splitting type, optionally checked by brute force.
    Census(CensusArgs),
    /// Frequency of f = g mod P against 1/q^n.
    Lemma11(Lemma11Args),
    /// Mean and variance of the splitting indicator per prime.
    Moments(PrimeStatArgs),
    /// Sample mean of pi_{f,r}(x).
    ExpectationPi(PrimeStatArgs),
    /// Psi_f(M) for one polynomial, with its prime exponent table.
    Psi(PsiArgs),
    /// Psi over a random ensemble for one or more M.
    PsiEnsemble(PsiEnsembleArgs),
    /// The degree-one case: ray-class and integer forms.
    Linear(LinearArgs),
    /// S_n certificates for one polynomial or an ensemble.
    Certify(CertifyArgs),
    /// Prime decomposition table over a range of rational primes.
    FactorField(FactorFieldArgs),
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleArgs {
    /// Defining polynomial of K; "x" is Q.
    #[arg(long, default_value = "x")]
    pub field: String,
    /// Degree n of the random polynomials.
    #[arg(long)]
    pub n: usize,
    /// Height bound N.
    #[arg(long = "height", visible_alias = "N", default_value_t = 100)]
    pub height: u64,
    #[arg(long, default_value_t = 100)]
    pub samples: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Enumerate every polynomial of height at most N instead of sampling.
    #[arg(long)]
    pub exhaustive: bool,
    /// Keep samples without an S_n certificate.
    #[arg(long)]
    pub no_condition: bool,
    /// Primes scanned per S_n certificate.
    #[arg(long, default_value_t = DEFAULT_PRIME_BUDGET)]
    pub budget: usize,
    /// Exponent of the range guards, in (0, 1].
    #[arg(long, default_value_t = DEFAULT_XI)]
    pub xi: f64,
}

impl EnsembleArgs {
    fn params(&self) -> Result<EnsembleParams> {
        if !(self.xi > 0.0 && self.xi <= 1.0) {
            bail!(Error::InvalidParameter(format!("xi = {} must lie in (0, 1]", self.xi)));
        }
        if self.n == 0 {
            bail!(Error::InvalidParameter("n must be at least 1".into()));
        }
        Ok(EnsembleParams {
            n: self.n,
            height: self.height,
            source: if self.exhaustive {
                SampleSource::Exhaustive
            } else {
                SampleSource::Random {
                    samples: self.samples,
                    seed: self.seed,
                }
            },
            condition_sn: !self.no_condition,
            prime_budget: self.budget,
            xi: self.xi,
        })
    }
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusArgs {
    #[arg(long)]
    pub n: usize,
    /// Field sizes, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "2,3,4,5")]
    pub q: Vec<u64>,
    /// Compare every entry with brute-force factorization.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma11Args {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    /// Rational primes; every prime of K above each is tested.
    #[arg(long, value_delimiter = ',', default_value = "2,3,5,7")]
    pub primes: Vec<u64>,
    /// Residue target g (default: first irreducible of degree n mod p).
    #[arg(long)]
    pub target: Option<String>,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimeStatArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    /// Splitting type (r_1,...,r_n).
    #[arg(long)]
    pub r: String,
    /// Bound on prime norms.
    #[arg(long)]
    pub x: u64,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsiArgs {
    #[arg(long, default_value = "x")]
    pub field: String,
    /// The polynomial: "x^3-x-1" or a coefficient list "[a0,a1,...]".
    #[arg(long, conflicts_with = "n")]
    pub poly: Option<String>,
    /// Draw one random polynomial of this degree instead.
    #[arg(long, required_unless_present = "poly")]
    pub n: Option<usize>,
    #[arg(long = "height", visible_alias = "N", default_value_t = 100)]
    pub height: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Norm bound M.
    #[arg(long, default_value_t = 100)]
    pub m: u64,
    /// Enumerate every lambda instead of one per unit orbit.
    #[arg(long)]
    pub all_units: bool,
    /// Cross-check Psi against the direct integer lcm (K = Q only).
    #[arg(long)]
    pub degree_check: bool,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsiEnsembleArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    /// Norm bounds M, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub m: Vec<u64>,
    #[arg(long)]
    pub all_units: bool,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearArgs {
    #[arg(long, default_value = "x")]
    pub field: String,
    /// Constant term alpha of f(X) = nu X + alpha.
    #[arg(long, default_value = "1")]
    pub alpha: String,
    /// Modulus nu.
    #[arg(long)]
    pub nu: String,
    /// Norm bounds M, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub m: Vec<u64>,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifyArgs {
    #[arg(long, default_value = "x")]
    pub field: String,
    /// One polynomial; otherwise an ensemble from --n.
    #[arg(long, conflicts_with = "n")]
    pub poly: Option<String>,
    #[arg(long, required_unless_present = "poly")]
    pub n: Option<usize>,
    #[arg(long = "height", visible_alias = "N", default_value_t = 100)]
    pub height: u64,
    #[arg(long, default_value_t = 100)]
    pub samples: u64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_PRIME_BUDGET)]
    pub budget: usize,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorFieldArgs {
    #[arg(long, default_value = "x")]
    pub field: String,
    #[arg(long, default_value_t = 2)]
    pub from: u64,
    #[arg(long)]
    pub to: u64,
}

impl Command {
    /// Name used for output files.
    pub fn name(&self) -> &'static str {
        match self {
            Command::Census(_) => "census",
            Command::Lemma11(_) => "lemma11",
            Command::Moments(_) => "moments",
            Command::ExpectationPi(_) => "expectation-pi",
            Command::Psi(_) => "psi",
            Command::PsiEnsemble(_) => "psi-ensemble",
            Command::Linear(_) => "linear",
            Command::Certify(_) => "certify",
            Command::FactorField(_) => "factor-field",
        }
    }

    fn ensemble(&self) -> Option<&EnsembleArgs> {
        match self {
            Command::Lemma11(a) => Some(&a.ensemble),
            Command::Moments(a) | Command::ExpectationPi(a) => Some(&a.ensemble),
            Command::PsiEnsemble(a) => Some(&a.ensemble),
            _ => None,
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Command::Psi(a) if a.poly.is_none() => Some(a.seed),
            Command::Certify(a) if a.poly.is_none() => Some(a.seed),
            _ => self.ensemble().filter(|e| !e.exhaustive).map(|e| e.seed),
        }
    }

    pub fn xi(&self) -> Option<f64> {
        self.ensemble().map(|e| e.xi)
    }

    /// Sampling and enumeration mode, e.g. "random/unit-orbits".
    pub fn mode(&self) -> Option<String> {
        let enumeration = |all: bool| if all { EnumerationMode::AllUnits } else { EnumerationMode::UnitOrbits };
        match self {
            Command::Psi(a) => Some(format!(
                "{}/{}",
                if a.poly.is_some() { "fixed" } else { "random" },
                enumeration(a.all_units)
            )),
            Command::PsiEnsemble(a) => Some(format!(
                "{}/{}",
                sampling(&a.ensemble),
                enumeration(a.all_units)
            )),
            Command::Linear(_) => Some(EnumerationMode::AllUnits.to_string()),
            _ => self.ensemble().map(|e| sampling(e).to_string()),
        }
    }

    pub fn execute(&self) -> Result<ExperimentReport> {
        match self {
            Command::Census(a) => run_census(a),
            Command::Lemma11(a) => {
                let field = parse_field(&a.ensemble.field)?;
                let target = a
                    .target
                    .as_deref()
                    .map(|t| PolynomialSample::parse(&field, t))
                    .transpose()?;
                let params = Lemma11Params {
                    ensemble: a.ensemble.params()?,
                    primes: a.primes.clone(),
                    target,
                };
                Ok(run_lemma11(&field, &params)?)
            }
            Command::Moments(a) => Ok(run_indicator_moments(&parse_field(&a.ensemble.field)?, &a.params()?)?),
            Command::ExpectationPi(a) => Ok(run_expectation_pi(&parse_field(&a.ensemble.field)?, &a.params()?)?),
            Command::Psi(a) => run_psi(a),
            Command::PsiEnsemble(a) => {
                let field = parse_field(&a.ensemble.field)?;
                let params = PsiEnsembleParams {
                    ensemble: a.ensemble.params()?,
                    ms: a.m.clone(),
                    mode: if a.all_units { EnumerationMode::AllUnits } else { EnumerationMode::UnitOrbits },
                };
                Ok(run_psi_ensemble(&field, &params)?)
            }
            Command::Linear(a) => {
                let field = parse_field(&a.field)?;
                let params = LinearParams {
                    alpha: field.parse_element(&a.alpha)?,
                    nu: field.parse_element(&a.nu)?,
                    ms: a.m.clone(),
                };
                Ok(run_linear_case(&field, &params)?)
            }
            Command::Certify(a) => run_certify(a),
            Command::FactorField(a) => run_factor_field(a),
        }
    }
}

fn sampling(e: &EnsembleArgs) -> &'static str {
    if e.exhaustive {
        "exhaustive"
    } else {
        "random"
    }
}

impl PrimeStatArgs {
    fn params(&self) -> Result<PrimeStatParams> {
        Ok(PrimeStatParams {
            ensemble: self.ensemble.params()?,
            r: self.r.parse::<SplittingType>()?,
            x: self.x,
        })
    }
}

fn parse_field(spec: &str) -> Result<NumberField> {
    NumberField::parse(spec).with_context(|| format!("field {spec:?}"))
}

fn run_census(a: &CensusArgs) -> Result<ExperimentReport> {
    if a.n == 0 {
        bail!(Error::InvalidParameter("n must be at least 1".into()));
    }
    let mut report = ExperimentReport::new(
        "census",
        json!({ "n": a.n, "q": a.q, "oracle": a.oracle }),
        &[
            "r", "q", "census_poly", "delta", "c_r", "c_r_closed_form", "exact_count", "brute_count", "match",
        ],
    );
    let types = all_types(a.n);
    let mut mismatches = 0;
    for &q in &a.q {
        let brute = a.oracle.then(|| brute_force_census(a.n, q)).transpose()?;
        for r in &types {
            let cp = census(r);
            let exact = cp.count(q);
            let (c, closed) = match c_r(r) {
                Ok(c) => (c.exact.to_string(), c.closed_form.to_string()),
                Err(_) => (cp.second_order().to_string(), String::new()),
            };
            let (brute_count, matches) = match &brute {
                Some(b) => {
                    let count = b.count(r);
                    let ok = exact == count.into();
                    if !ok {
                        mismatches += 1;
                    }
                    (count.to_string(), ok.to_string())
                }
                None => (String::new(), String::new()),
            };
            report.push_row(vec![
                r.to_string(),
                q.to_string(),
                cp.to_string(),
                cp.density().to_string(),
                c,
                closed,
                exact.to_string(),
                brute_count,
                matches,
            ]);
        }
    }
    report.set("types", types.len());
    if a.oracle {
        report.set("oracle_mismatches", mismatches);
        if mismatches > 0 {
            report
                .warnings
                .push(format!("{mismatches} census entries disagree with brute force"));
        }
    }
    Ok(report)
}

fn run_psi(a: &PsiArgs) -> Result<ExperimentReport> {
    let field = parse_field(&a.field)?;
    let f = match (&a.poly, a.n) {
        (Some(text), _) => PolynomialSample::parse(&field, text)?,
        (None, Some(n)) => {
            if n == 0 {
                bail!(Error::InvalidParameter("n must be at least 1".into()));
            }
            SampleSource::Random { samples: 1, seed: a.seed }.get(&field, n, a.height, 0)
        }
        (None, None) => bail!(Error::InvalidParameter("give --poly or --n".into())),
    };
    if f.n() == 1 {
        bail!(Error::LinearCase("psi"));
    }
    let mode = if a.all_units { EnumerationMode::AllUnits } else { EnumerationMode::UnitOrbits };
    let value = compute_psi(&field, &f, a.m, mode)?;
    let mut report = ExperimentReport::new(
        "psi",
        json!({
            "field": field.spec(),
            "poly": f.to_string(),
            "M": a.m,
            "enumeration": mode.to_string(),
            "seed": a.poly.is_none().then_some(a.seed),
            "N": a.poly.is_none().then_some(a.height),
        }),
        &["prime", "p", "residue_degree", "ramification", "alpha", "beta"],
    );
    for h in &value.histogram {
        report.push_row(vec![
            h.prime.label(),
            h.prime.p().to_string(),
            h.prime.residue_degree().to_string(),
            h.prime.ramification().to_string(),
            h.alpha.to_string(),
            h.beta.to_string(),
        ]);
    }
    report.set_f64("psi", value.psi);
    report.set_f64("log_p", value.log_p);
    report.set("lambda_count", value.lambda_count);
    report.set("skipped_zero", value.skipped_zero);
    report.set("lcm_norm_digits", value.accumulator.norm().to_string().len());
    if a.degree_check {
        let coeffs = f
            .integer_coeffs()
            .filter(|_| field.is_rational())
            .ok_or_else(|| Error::UnsupportedField("--degree-check needs K = Q".into()))?;
        let mut l = BigInt::one();
        let lambdas = field.elements_up_to_norm(a.m, mode)?;
        for lambda in &lambdas {
            let x = &lambda.coords()[0];
            let v = coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c);
            if !v.is_zero() {
                l = l.lcm(&v);
            }
        }
        let ok = BigInt::from(value.accumulator.norm()) == l.abs();
        report.set("oracle_lcm", l.abs().to_string());
        report.set("oracle_match", ok);
        if !ok {
            bail!("Psi disagrees with the integer lcm oracle");
        }
    }
    Ok(report)
}

fn run_certify(a: &CertifyArgs) -> Result<ExperimentReport> {
    let field = parse_field(&a.field)?;
    let (polys, source): (Vec<PolynomialSample>, Value) = match (&a.poly, a.n) {
        (Some(text), _) => (vec![PolynomialSample::parse(&field, text)?], json!({ "poly": text })),
        (None, Some(n)) => {
            let src = SampleSource::Random {
                samples: a.samples,
                seed: a.seed,
            };
            let polys = (0..a.samples).map(|i| src.get(&field, n, a.height, i)).collect();
            (polys, json!({ "n": n, "N": a.height, "samples": a.samples, "seed": a.seed }))
        }
        (None, None) => bail!(Error::InvalidParameter("give --poly or --n".into())),
    };
    let mut report = ExperimentReport::new(
        "certify",
        json!({ "field": field.spec(), "budget": a.budget, "source": source }),
        &["sample", "poly", "status", "primes_examined", "witnesses"],
    );
    let primes = field.first_primes(a.budget)?;
    let mut certified = 0;
    for (i, f) in polys.iter().enumerate() {
        let cert = certify_sn_with_primes(f, &primes);
        if cert.is_certified() {
            certified += 1;
        }
        let witnesses: Vec<String> = cert
            .witnesses
            .iter()
            .map(|w| format!("{}@{}", w.splitting_type, w.prime.label()))
            .collect();
        report.push_row(vec![
            i.to_string(),
            f.to_string(),
            if cert.is_certified() { "certified-sn" } else { "unknown" }.into(),
            cert.primes_examined.to_string(),
            witnesses.join(";"),
        ]);
    }
    report.set("samples", polys.len());
    report.set("certified", certified);
    if !polys.is_empty() {
        report.set_f64("certified_fraction", certified as f64 / polys.len() as f64);
    }
    Ok(report)
}

fn run_factor_field(a: &FactorFieldArgs) -> Result<ExperimentReport> {
    let field = parse_field(&a.field)?;
    let mut report = ExperimentReport::new(
        "factor-field",
        json!({ "field": field.spec(), "from": a.from, "to": a.to }),
        &["p", "prime", "ramification", "residue_degree", "norm"],
    );
    let table = field.decomposition_table(a.from, a.to)?;
    for prime in &table {
        report.push_row(vec![
            prime.p().to_string(),
            prime.label(),
            prime.ramification().to_string(),
            prime.residue_degree().to_string(),
            prime.norm().to_string(),
        ]);
    }
    report.set("discriminant", field.discriminant().to_string());
    report.set("degree", field.degree());
    report.set("primes", table.len());
    report.set(
        "ramified_primes",
        table
            .iter()
            .filter(|p| p.ramification() > 1)
            .map(|p| p.p())
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect::<Vec<_>>(),
    );
    Ok(report)
}
