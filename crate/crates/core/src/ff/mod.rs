//! Finite fields `F_p`, `F_{p^f}`, polynomial arithmetic over them, and
//! complete factorization.
//!
//! Equal-degree splitting is randomized; callers pass the RNG. Factor lists
//! are sorted canonically so the output never depends on the random draws.

mod count;
mod factor;
mod field;
mod poly;

pub use count::{count_irreducibles, count_irreducibles_u64, irreducible_count_poly};
pub use factor::{
    count_distinct_roots, distinct_degree, equal_degree, factor_fq, is_irreducible, is_squarefree,
    splitting_type, squarefree_decomposition,
};
pub use field::{ExtensionField, Field, PrimeField};
pub use poly::{FqPoly, PolyRing};
