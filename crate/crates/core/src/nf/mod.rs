//! Monogenic number fields `K = Q(theta)` with `O_K = Z[theta]`: element
//! arithmetic and norms, Dedekind prime decomposition, residue maps, ideal
//! valuations, lcm accumulation and enumeration by bounded norm.
//!
//! Elements are coordinate vectors in the power basis `1, theta, ...`.
//! Primes are `(p, h(theta))` with `h` an irreducible factor of `g mod p`.

mod enumerate;
mod field;
mod hnf;
mod lcm;
mod linalg;
mod prime;
mod valuation;

pub use enumerate::{quadratic_form_points, EnumerationMode, MAX_NORM_BOUND};
pub use field::{poly_discriminant, FieldElement, NumberField};
pub use hnf::IdealHnf;
pub use lcm::LcmAccumulator;
pub use linalg::{determinant, hermite_normal_form};
pub use prime::{PrimeIdeal, Residue, ResidueField};
pub use valuation::{ideal_factorization, valuation, valuation_fast, valuation_hnf};
