use thiserror::Error;

/// Errors surfaced by the library. Every failure mode is reported, never
/// silently absorbed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("factorization budget of {budget} iterations exhausted on composite cofactor {cofactor}")]
    FactorBudgetExceeded { cofactor: String, budget: u64 },

    #[error("cannot parse {what} from {input:?}: {msg}")]
    Parse {
        what: &'static str,
        input: String,
        msg: String,
    },

    #[error("defining polynomial {0} is not irreducible over Q")]
    Reducible(String),

    #[error("Z[theta] is not the maximal order at p = {p} (Dedekind criterion fails)")]
    NotMonogenic { p: u64 },

    #[error("unsupported field: {0}")]
    UnsupportedField(String),

    #[error("enumeration of {size} items exceeds the budget of {budget}")]
    BudgetExceeded { size: String, budget: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degree-1 polynomials are handled by the linear-case experiment (`linear`), not by {0}")]
    LinearCase(&'static str),

    #[error("residue {0} shares a factor with the modulus")]
    NonCoprimeResidue(String),

    #[error("rational prime {0} does not fit in 64 bits")]
    PrimeTooLarge(String),

    #[error("{modulus} is not an irreducible modulus over F_{p}")]
    ReducibleModulus { p: u64, modulus: String },

    #[error("{0} is not a prime power")]
    NotPrimePower(String),

    #[error("while processing lambda = {lambda}: {source}")]
    AtElement {
        lambda: String,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
