//! The triple sum over `S = {(a,b,c) ∈ (F_p^×)³ : ab + bc + ca = 0}`
//!
//! ```text
//! L(p) = Σ_S ψ(abc) / ((1 − ζ^a)(1 − ζ^b)(1 − ζ^c)),   ζ = e^{2πi/p},
//! ```
//!
//! with `ψ` the quadratic character mod a prime `p ≡ 3 (mod 4)`, compared
//! against `−√p ((p+1)/4 · B_{1,ψ} + B_{3,ψ}/6)`.
//!
//! The left side turns out to be purely imaginary and equal to `i` times
//! that expression, i.e. the right side with `√(−p) = i√p` in place of
//! `√p`. Both readings are reported.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bernoulli::{gen_bernoulli_exact, legendre_symbol, rat, rational_to_f64, DirichletCharacter};
use crate::error::{Error, Result};
use crate::numerics::{c64, ComplexValue, KahanSum};
use crate::primes::is_prime_u64;

pub const IDENTITY_PRIME_CAP: u64 = 200;
pub const ENUMERATION_CHECK_CAP: u64 = 50;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub p: u64,
    pub lhs: ComplexValue,
    /// `−√p ((p+1)/4 · B_{1,ψ} + B_{3,ψ}/6)`
    pub rhs: ComplexValue,
    pub abs_diff: f64,
    /// The same expression with `√(−p) = i√p`.
    pub rhs_sqrt_minus_p: ComplexValue,
    pub abs_diff_sqrt_minus_p: f64,
    pub b1: String,
    pub b3: String,
    pub triple_count: u64,
}

fn inverse_mod(a: u64, p: u64) -> u64 {
    // Fermat
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

pub fn verify_identity(p: u64) -> Result<IdentityReport> {
    if !is_prime_u64(p) || p % 4 != 3 || p > IDENTITY_PRIME_CAP {
        return Err(Error::Precondition(format!(
            "identity needs a prime p = 3 mod 4 with p <= {IDENTITY_PRIME_CAP}, got {p}"
        )));
    }
    // 1/(1 − ζ^k), k = 0..p−1 (k = 0 unused)
    let inv: Vec<ComplexValue> = (0..p)
        .map(|k| {
            let ang = 2.0 * PI * k as f64 / p as f64;
            1.0 / (1.0 - c64(ang.cos(), ang.sin()))
        })
        .collect();
    let psi: Vec<i64> = (0..p).map(|k| legendre_symbol(k as i64, p)).collect();

    let rows: Vec<(ComplexValue, u64)> = (1..p)
        .into_par_iter()
        .map(|a| {
            let mut acc = KahanSum::new();
            let mut count = 0;
            for b in 1..p {
                let s = (a + b) % p;
                if s == 0 {
                    continue;
                }
                // ab + c(a + b) = 0
                let c = (p - a * b % p) % p * inverse_mod(s, p) % p;
                if c == 0 {
                    continue;
                }
                count += 1;
                let sign = psi[(a * b % p * c % p) as usize] as f64;
                acc.add(inv[a as usize] * inv[b as usize] * inv[c as usize] * sign);
            }
            (acc.value(), count)
        })
        .collect();
    let lhs = rows.iter().map(|r| r.0).collect::<KahanSum>().value();
    let triple_count = rows.iter().map(|r| r.1).sum();

    let chi = DirichletCharacter::legendre(p)?;
    let b1 = gen_bernoulli_exact(&chi, 1)?.expect("quadratic character is real");
    let b3 = gen_bernoulli_exact(&chi, 3)?.expect("quadratic character is real");
    let inner = rat((p + 1) as i64, 4) * &b1 + &b3 / rat(6, 1);
    let value = -(p as f64).sqrt() * rational_to_f64(&inner);
    let rhs = c64(value, 0.0);
    let rhs_sqrt_minus_p = c64(0.0, value);
    Ok(IdentityReport {
        p,
        lhs,
        rhs,
        abs_diff: (lhs - rhs).norm(),
        rhs_sqrt_minus_p,
        abs_diff_sqrt_minus_p: (lhs - rhs_sqrt_minus_p).norm(),
        b1: b1.to_string(),
        b3: b3.to_string(),
        triple_count,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleCount {
    pub p: u64,
    /// `(p − 1)(p − 2)`
    pub closed_form: u64,
    /// Brute-force count over all of `(F_p^×)³`, for `p ≤ 50`.
    pub enumerated: Option<u64>,
}

/// Counts `(a, b, c) ∈ (F_p^×)³` with `ab + bc + ca = 0` by trying every
/// triple.
pub fn enumerate_triples(p: u64) -> u64 {
    let mut n = 0;
    for a in 1..p {
        for b in 1..p {
            for c in 1..p {
                if (a * b + b * c + c * a) % p == 0 {
                    n += 1;
                }
            }
        }
    }
    n
}

pub fn triple_set_size(p: u64) -> Result<TripleCount> {
    if p < 3 || !is_prime_u64(p) {
        return Err(Error::Precondition(format!("need an odd prime, got {p}")));
    }
    Ok(TripleCount {
        p,
        closed_form: (p - 1) * (p - 2),
        enumerated: (p <= ENUMERATION_CHECK_CAP).then(|| enumerate_triples(p)),
    })
}
