//! Exact integer, rational and polynomial arithmetic plus factorization
//! primitives shared by every other module.

mod intpoly;
mod primes;
mod ratpoly;

pub use intpoly::{format_int_poly, parse_int_poly};
pub use primes::{
    add_mod, divisors, factor, factor_u64, factor_u64_with_budget, factor_with_budget, inv_mod,
    is_prime, is_prime_u64, moebius, mul_mod, p_adic_valuation, pow_mod, prime_power, primality,
    primes_up_to, FactorMultiset, Primality, DEFAULT_RHO_BUDGET, TRIAL_BOUND,
};
pub use ratpoly::{poly_binomial, Rational, RationalPoly};

pub use num_bigint::{BigInt as Integer, BigUint as Natural};
