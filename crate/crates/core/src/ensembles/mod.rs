//! Random polynomials over `O_K` in the box model, Frobenius cycle types at
//! primes of `K`, and one-sided `S_n` certification.
//!
//! The indicator `1_{f,r}(P)` is taken to be "f is unramified at `P` and
//! `f mod P` has splitting type `r`", and `pi_{f,r}(x)` counts such primes of
//! norm at most `x`.

mod certify;
mod frobenius;
mod sample;

pub use certify::{
    certify_sn, certify_sn_with_primes, non_sn_fraction, CertificateStatus, NonSnEstimate, SnCertificate, Witness,
    DEFAULT_PRIME_BUDGET,
};
pub use frobenius::{congruent_mod, frobenius_type, pi_fr, s_wp, FrobeniusOutcome};
pub use sample::{has_rational_root, sample, stream_rng, PolynomialSample, SampleSource, EXHAUSTIVE_BUDGET};
