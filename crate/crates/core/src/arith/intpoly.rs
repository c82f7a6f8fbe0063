//! Parsing and printing of integer polynomials in one variable.
//!
//! Grammar: a sum of terms `c`, `c*x`, `cx`, `x^k`, `c*x^k` with optional
//! signs and whitespace; the variable is `x` or `X`. `"x"` alone is the
//! degree-one polynomial and denotes Q when used as a field specification.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Coefficients low degree first, trailing zeros trimmed.
pub fn parse_int_poly(input: &str) -> Result<Vec<BigInt>> {
    let err = |msg: &str| Error::Parse {
        what: "integer polynomial",
        input: input.to_string(),
        msg: msg.to_string(),
    };
    let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(err("empty input"));
    }
    let mut coeffs: Vec<BigInt> = Vec::new();
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let mut sign = BigInt::one();
        while i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
            if bytes[i] == b'-' {
                sign = -sign;
            }
            i += 1;
        }
        let start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        let coeff: Option<BigInt> = if i > start {
            Some(s[start..i].parse().map_err(|_| err("bad coefficient"))?)
        } else {
            None
        };
        if i < bytes.len() && bytes[i] == b'*' {
            i += 1;
            if i >= bytes.len() || !matches!(bytes[i], b'x' | b'X') {
                return Err(err("expected the variable after '*'"));
            }
        }
        let mut degree = 0usize;
        if i < bytes.len() && matches!(bytes[i], b'x' | b'X') {
            i += 1;
            degree = 1;
            if i < bytes.len() && bytes[i] == b'^' {
                i += 1;
                let ds = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if ds == i {
                    return Err(err("missing exponent after '^'"));
                }
                degree = s[ds..i].parse().map_err(|_| err("bad exponent"))?;
            }
        } else if coeff.is_none() {
            return Err(err("expected a coefficient or the variable"));
        }
        if i < bytes.len() && !matches!(bytes[i], b'+' | b'-') {
            return Err(err("unexpected character"));
        }
        if coeffs.len() <= degree {
            coeffs.resize(degree + 1, BigInt::zero());
        }
        coeffs[degree] += sign * coeff.unwrap_or_else(BigInt::one);
    }
    while coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    if coeffs.is_empty() {
        return Err(err("zero polynomial"));
    }
    Ok(coeffs)
}

/// Inverse of [`parse_int_poly`], highest degree first: `x^3 - x - 1`.
pub fn format_int_poly(coeffs: &[BigInt]) -> String {
    let mut out = String::new();
    for (k, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        let a = c.abs();
        let var = match k {
            0 => String::new(),
            1 => "x".into(),
            _ => format!("x^{k}"),
        };
        if var.is_empty() {
            out.push_str(&a.to_string());
        } else if a.is_one() {
            out.push_str(&var);
        } else {
            out.push_str(&format!("{a}*{var}"));
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
