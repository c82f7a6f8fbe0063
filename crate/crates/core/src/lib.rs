//! Splitting-type statistics of random polynomials over residue fields,
//! ideal least common multiples of polynomial values in monogenic number
//! fields, and Monte Carlo ensembles of random `S_n`-polynomials.
//!
//! Module map:
//!
//! * [`arith`]: exact integers, rationals, rational polynomials, primality
//!   and factorization.
//! * [`ff`]: finite fields and polynomial factorization over them.
//! * [`nf`]: monogenic number fields, prime decomposition, valuations and
//!   lcm accumulation.
//! * [`splitting`]: census polynomials `|X_{n,r}|(q)`, densities and
//!   second-order constants.
//! * [`ensembles`]: random polynomials, Frobenius cycle types and `S_n`
//!   certification.
//! * [`experiments`]: the desk-scale experiments and their reports.

pub mod arith;
pub mod ensembles;
pub mod error;
pub mod experiments;
pub mod ff;
pub mod nf;
pub mod splitting;
mod splitting_type;

pub use error::{Error, Result};
pub use splitting_type::SplittingType;
