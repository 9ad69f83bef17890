//! Dirichlet characters and the generalized Bernoulli numbers
//!
//! ```text
//! Σ_{a=1}^{f} χ(a) t e^{at} / (e^{ft} − 1) = Σ_n B_{n,χ} t^n / n!
//! B_{n,χ} = f^{n−1} Σ_{a=1}^{f} χ(a) B_n(a/f)
//! ```

use std::f64::consts::PI;

use num::{BigInt, BigRational, Integer, One, Zero};

use super::poly::{rat_int, rational_to_f64, RationalPolynomial};
use super::{bernoulli_slice, check_cap};
use crate::error::{Error, Result};
use crate::numerics::{c64, real, ComplexValue, KahanSum};
use crate::primes::is_prime_u64;

const CHAR_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct DirichletCharacter {
    modulus: u64,
    values: Vec<ComplexValue>,
}

fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % m as u128) as u64;
        }
        b = (b as u128 * b as u128 % m as u128) as u64;
        e >>= 1;
    }
    r
}

/// Legendre symbol `(a/p)` for an odd prime `p`, by Euler's criterion.
pub fn legendre_symbol(a: i64, p: u64) -> i64 {
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

fn require_odd_prime(p: u64) -> Result<()> {
    if p < 3 || !is_prime_u64(p) {
        Err(Error::Precondition(format!("{p} is not an odd prime")))
    } else {
        Ok(())
    }
}

/// Smallest primitive root modulo an odd prime.
pub fn primitive_root(p: u64) -> Result<u64> {
    require_odd_prime(p)?;
    let phi = p - 1;
    let mut factors = Vec::new();
    let mut m = phi;
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            factors.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..p)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, phi / q, p) != 1))
        .ok_or_else(|| Error::Invariant(format!("no primitive root mod {p}")))
}

impl DirichletCharacter {
    /// Builds a character from its value table `χ(0), …, χ(f−1)` after
    /// checking support, normalization and multiplicativity on units.
    pub fn new(modulus: u64, values: Vec<ComplexValue>) -> Result<Self> {
        if modulus == 0 || values.len() as u64 != modulus {
            return Err(Error::InvalidInput(format!(
                "character mod {modulus} needs {modulus} values, got {}",
                values.len()
            )));
        }
        for (a, v) in values.iter().enumerate() {
            let unit = gcd(a as u64, modulus) == 1;
            let ok = if unit { (v.norm() - 1.0).abs() < CHAR_EPS } else { v.norm() < CHAR_EPS };
            if !ok {
                return Err(Error::InvalidInput(format!("χ({a}) = {v} breaks the support condition")));
            }
        }
        if (values[1 % modulus as usize] - 1.0).norm() > CHAR_EPS {
            return Err(Error::InvalidInput("χ(1) must equal 1".into()));
        }
        let f = modulus as usize;
        for a in 1..f {
            for b in a..f {
                let lhs = values[a * b % f];
                if (lhs - values[a] * values[b]).norm() > 1e-9 {
                    return Err(Error::InvalidInput(format!("χ({a}·{b}) ≠ χ({a})χ({b})")));
                }
            }
        }
        Ok(Self { modulus, values })
    }

    /// The principal character mod `f`.
    pub fn principal(f: u64) -> Result<Self> {
        if f == 0 {
            return Err(Error::InvalidInput("modulus must be positive".into()));
        }
        let values = (0..f)
            .map(|a| if gcd(a, f) == 1 { real(1.0) } else { real(0.0) })
            .collect();
        Ok(Self { modulus: f, values })
    }

    /// The quadratic character `(·/p)` for an odd prime `p`.
    pub fn legendre(p: u64) -> Result<Self> {
        require_odd_prime(p)?;
        let values = (0..p).map(|a| real(legendre_symbol(a as i64, p) as f64)).collect();
        Ok(Self { modulus: p, values })
    }

    /// `χ(g^k) = e^{2πi jk/(p−1)}` for the smallest primitive root `g` mod
    /// an odd prime `p`. `j = (p−1)/2` is the quadratic character.
    pub fn from_generator(p: u64, j: u64) -> Result<Self> {
        let g = primitive_root(p)?;
        let phi = p - 1;
        let mut values = vec![real(0.0); p as usize];
        let mut x = 1u64;
        for k in 0..phi {
            let angle = 2.0 * PI * ((j * k) % phi) as f64 / phi as f64;
            values[x as usize] = c64(angle.cos(), angle.sin());
            x = x * g % p;
        }
        // exact 0/±1 where the angle is a multiple of π
        for v in values.iter_mut() {
            for target in [1.0, -1.0] {
                if (*v - target).norm() < 1e-13 {
                    *v = real(target);
                }
            }
        }
        Ok(Self { modulus: p, values })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn values(&self) -> &[ComplexValue] {
        &self.values
    }

    /// `χ(a)`, extended periodically to all integers.
    pub fn value(&self, a: i64) -> ComplexValue {
        self.values[a.rem_euclid(self.modulus as i64) as usize]
    }

    /// Integer values when every `χ(a)` is 0 or ±1.
    pub fn real_values(&self) -> Option<Vec<i64>> {
        self.values
            .iter()
            .map(|v| {
                [0i64, 1, -1]
                    .into_iter()
                    .find(|&k| (*v - k as f64).norm() < CHAR_EPS)
            })
            .collect()
    }

    pub fn is_real(&self) -> bool {
        self.real_values().is_some()
    }
}

/// Coefficients of `B_n(x) = Σ_k C(n,k) b_k x^{n−k}`.
pub fn bernoulli_poly_coeffs(n: usize) -> Result<RationalPolynomial> {
    check_cap(n, super::B_PARTIAL_CAP)?;
    let b = bernoulli_slice(n)?;
    let mut coeffs = vec![BigRational::zero(); n + 1];
    let mut c = BigInt::one();
    for (k, bk) in b.iter().enumerate() {
        if k > 0 {
            c = c * (n - k + 1) / k;
        }
        coeffs[n - k] = bk * BigRational::from_integer(c.clone());
    }
    Ok(RationalPolynomial::new(coeffs))
}

pub fn bernoulli_poly(n: usize, x: &BigRational) -> Result<BigRational> {
    Ok(bernoulli_poly_coeffs(n)?.eval(x))
}

/// `f^{n−1} B_n(a/f)` for `a = 1..f`.
fn scaled_terms(f: u64, n: usize) -> Result<Vec<BigRational>> {
    let bp = bernoulli_poly_coeffs(n)?;
    let fr = rat_int(f as i64);
    let scale = if n == 0 {
        BigRational::one() / &fr
    } else {
        num::pow(fr.clone(), n - 1)
    };
    Ok((1..=f)
        .map(|a| bp.eval(&(rat_int(a as i64) / &fr)) * &scale)
        .collect())
}

/// `B_{n,χ}` exactly, for a real character; `None` when `χ` takes
/// non-real values.
pub fn gen_bernoulli_exact(chi: &DirichletCharacter, n: usize) -> Result<Option<BigRational>> {
    let Some(vals) = chi.real_values() else {
        return Ok(None);
    };
    let terms = scaled_terms(chi.modulus, n)?;
    let f = chi.modulus as usize;
    let acc = terms
        .iter()
        .enumerate()
        .fold(BigRational::zero(), |acc, (i, t)| match vals[(i + 1) % f] {
            0 => acc,
            1 => acc + t,
            _ => acc - t,
        });
    Ok(Some(acc))
}

/// `B_{n,χ}` for any character. Exact for real `χ`; for complex `χ` the
/// rational terms are exact and only the final weighting is in floating
/// point.
pub fn gen_bernoulli(chi: &DirichletCharacter, n: usize) -> Result<ComplexValue> {
    if let Some(q) = gen_bernoulli_exact(chi, n)? {
        return Ok(real(rational_to_f64(&q)));
    }
    let terms = scaled_terms(chi.modulus, n)?;
    let mut acc = KahanSum::new();
    for (i, t) in terms.iter().enumerate() {
        acc.add(chi.value(i as i64 + 1) * rational_to_f64(t));
    }
    Ok(acc.value())
}
