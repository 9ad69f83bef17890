//! Bernoulli numbers over exact rationals and the binomial partial sums
//!
//! ```text
//! b_n(z) = Σ_{r=0}^{n} C(z, r) b_r
//! ```
//!
//! with the signed convention `b_1 = −1/2`. The `r = 0` term is included, so
//! `b_2(z) = 1 − z/2 + z(z−1)/12`. At a nonnegative integer `k` the sum
//! terminates: `b_n(k) = b_k` for `2 ≤ k ≤ n`, `b_n(1) = 1/2`, `b_n(0) = 1`.
//! The limit `b(z) = −z ζ̂(1 − z)` continues these values to the plane.
//!
//! The positive convention `B_k = |b_{2k}|` is available through
//! [`positive_bernoulli`].

mod character;
mod poly;

use std::sync::OnceLock;

use num::{BigInt, BigRational, One, Zero};
use serde::{Deserialize, Serialize};

pub use character::{
    bernoulli_poly, bernoulli_poly_coeffs, gen_bernoulli, gen_bernoulli_exact, legendre_symbol,
    primitive_root, DirichletCharacter,
};
pub use poly::{rat, rat_int, rational_to_f64, RationalPolynomial};

use crate::error::{Error, Result};
use crate::numerics::{binom, c64, format_complex, near_integer, real, ComplexValue, KahanSum};
use crate::primes::PrimeTable;
use crate::prime_zeta::p_hat;
use crate::zeta_core::zeta_hat;

pub const BERNOULLI_CAP: usize = 200;
pub const B_PARTIAL_CAP: usize = 100;
pub const G_FACTOR_CAP: usize = 40;

/// `|b(1−z)|` below which [`zeta_from_b`] reports a vanishing factor.
pub const B_ZERO_EPS: f64 = 1e-10;

fn table() -> &'static [BigRational] {
    static TABLE: OnceLock<Vec<BigRational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // b_m = −1/(m+1) Σ_{k<m} C(m+1, k) b_k
        let mut b: Vec<BigRational> = Vec::with_capacity(BERNOULLI_CAP + 1);
        b.push(BigRational::one());
        let mut row: Vec<BigInt> = vec![BigInt::one(), BigInt::one()]; // C(1, ·)
        for m in 1..=BERNOULLI_CAP {
            // advance row to C(m+1, ·)
            let mut next = vec![BigInt::one(); row.len() + 1];
            for k in 1..row.len() {
                next[k] = &row[k - 1] + &row[k];
            }
            row = next;
            let s = if m > 1 && m % 2 == 1 {
                BigRational::zero()
            } else {
                let acc = (0..m).fold(BigRational::zero(), |acc, k| {
                    if b[k].is_zero() {
                        acc
                    } else {
                        acc + &b[k] * BigRational::from_integer(row[k].clone())
                    }
                });
                -acc / BigRational::from_integer(BigInt::from(m + 1))
            };
            b.push(s);
        }
        b
    })
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::Capacity {
            requested: n as u64,
            cap: cap as u64,
        })
    } else {
        Ok(())
    }
}

/// `b_0, …, b_{n_max}` in the signed convention.
pub fn bernoulli_numbers(n_max: usize) -> Result<Vec<BigRational>> {
    check_cap(n_max, BERNOULLI_CAP)?;
    Ok(table()[..=n_max].to_vec())
}

pub fn bernoulli_number(k: usize) -> Result<BigRational> {
    check_cap(k, BERNOULLI_CAP)?;
    Ok(table()[k].clone())
}

pub(crate) fn bernoulli_slice(n_max: usize) -> Result<&'static [BigRational]> {
    check_cap(n_max, BERNOULLI_CAP)?;
    Ok(&table()[..=n_max])
}

/// Positive convention `B_k = |b_{2k}|`, `k ≥ 1`: 1/6, 1/30, 1/42, 1/30, …
pub fn positive_bernoulli(k: usize) -> Result<BigRational> {
    if k == 0 {
        return Err(Error::InvalidInput("positive Bernoulli index starts at 1".into()));
    }
    let b = bernoulli_number(2 * k)?;
    Ok(if b < BigRational::zero() { -b } else { b })
}

/// `C(z, r)` as a polynomial in `z`.
pub fn binomial_poly(r: usize) -> RationalPolynomial {
    let mut p = RationalPolynomial::constant(BigRational::one());
    for j in 0..r {
        p = &p * &RationalPolynomial::new(vec![rat(-(j as i64), (j + 1) as i64), rat(1, (j + 1) as i64)]);
    }
    p
}

/// `b_n(z)` as an exact polynomial, `n ≤ 100`.
pub fn b_partial_poly(n: usize) -> Result<RationalPolynomial> {
    check_cap(n, B_PARTIAL_CAP)?;
    let b = bernoulli_slice(n)?;
    let mut acc = RationalPolynomial::zero();
    // falling factorial z(z−1)…(z−r+1) / r!, built incrementally
    let mut c = RationalPolynomial::constant(BigRational::one());
    for (r, br) in b.iter().enumerate() {
        if r > 0 {
            let r1 = r as i64;
            c = &c * &RationalPolynomial::new(vec![rat(-(r1 - 1), r1), rat(1, r1)]);
        }
        if !br.is_zero() {
            acc = &acc + &c.scale(br);
        }
    }
    Ok(acc)
}

/// Integer zeros of `b_n(z)` forced by termination, for even `n ≥ 2`:
/// `3, 5, …, n+1` and `n+2`.
pub fn trivial_zeros(n: usize) -> Vec<i64> {
    let n = n as i64;
    let mut z: Vec<i64> = (3..=n + 1).step_by(2).collect();
    z.push(n + 2);
    z
}

/// The cofactor `g_n(z)` in
///
/// ```text
/// b_n(z) = (b_n / n!) (z−3)(z−5)···(z−(n+1)) (z−(n+2)) g_n(z),   n even,
/// ```
///
/// by exact division. A nonzero remainder is an error.
pub fn g_factor(n: usize) -> Result<RationalPolynomial> {
    if n < 2 || n % 2 == 1 || n > G_FACTOR_CAP {
        return Err(Error::Precondition(format!(
            "g_factor needs an even index in 2..={G_FACTOR_CAP}, got {n}"
        )));
    }
    let p = b_partial_poly(n)?;
    let mut fact = BigInt::one();
    for k in 2..=n {
        fact *= k;
    }
    let lead = bernoulli_number(n)? / BigRational::from_integer(fact);
    let roots: Vec<BigRational> = trivial_zeros(n).into_iter().map(rat_int).collect();
    let d = RationalPolynomial::from_roots(lead, &roots);
    let (q, r) = p.div_rem(&d);
    if !r.is_zero() {
        return Err(Error::NonDivisible(format!("b_{n}(z) leaves remainder {r}")));
    }
    Ok(q)
}

/// `b_n(k)` at a nonnegative integer, exactly. Equals `b_n(z)` for every
/// `n ≥ k`.
pub fn b_at_integer(k: usize) -> Result<BigRational> {
    let b = bernoulli_slice(k)?;
    let mut c = BigInt::one();
    let mut acc = BigRational::zero();
    for (r, br) in b.iter().enumerate() {
        if r > 0 {
            c = c * (k - r + 1) / r;
        }
        acc += br * BigRational::from_integer(c.clone());
    }
    Ok(acc)
}

/// `b_n(z)` in floating point, `n ≤ 200`.
pub fn b_partial(z: ComplexValue, n: usize) -> Result<ComplexValue> {
    let b = bernoulli_slice(n)?;
    let mut acc = KahanSum::new();
    for (r, br) in b.iter().enumerate() {
        if !br.is_zero() {
            acc.add(binom(z, r as u32) * rational_to_f64(br));
        }
    }
    Ok(acc.value())
}

/// `b(z) = −z ζ̂(1 − z)`. At `z = 0` the removable singularity is filled
/// with its limit 1.
pub fn b_limit(z: ComplexValue) -> Result<ComplexValue> {
    if near_integer(z, 1e-12) == Some(0) {
        return Ok(real(1.0));
    }
    Ok(-z * zeta_hat(1.0 - z)?)
}

/// `b(z)`: exact termination at nonnegative integers, [`b_limit`] elsewhere.
pub fn b_value(z: ComplexValue) -> Result<ComplexValue> {
    match near_integer(z, 1e-12) {
        Some(k) if (0..=BERNOULLI_CAP as i64).contains(&k) => {
            Ok(real(rational_to_f64(&b_at_integer(k as usize)?)))
        }
        _ => b_limit(z),
    }
}

/// Richardson extrapolation of `b_n(z)` over even `n`, the reproducible
/// stand-in for the "DC" regularization of the divergent sum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DcEstimate {
    pub z: ComplexValue,
    /// `(n, b_n(z))` at `n_max/8, n_max/4, n_max/2, n_max`.
    pub samples: Vec<(u64, ComplexValue)>,
    /// Top of the Richardson triangle under an `a + c/n + d/n² + …` model.
    pub extrapolated: ComplexValue,
    /// `|extrapolated − last sample|`.
    pub spread: f64,
}

pub fn b_dc(z: ComplexValue, n_max: usize) -> Result<DcEstimate> {
    if n_max < 16 || !n_max.is_multiple_of(16) {
        return Err(Error::Precondition(format!(
            "DC extrapolation needs n_max a positive multiple of 16, got {n_max}"
        )));
    }
    let ns: Vec<usize> = [8, 4, 2, 1].iter().map(|d| n_max / d).collect();
    let samples = ns
        .iter()
        .map(|&n| Ok((n as u64, b_partial(z, n)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut level: Vec<ComplexValue> = samples.iter().map(|s| s.1).collect();
    let mut pow = 2.0;
    while level.len() > 1 {
        level = level
            .windows(2)
            .map(|w| (pow * w[1] - w[0]) / (pow - 1.0))
            .collect();
        pow *= 2.0;
    }
    let extrapolated = level[0];
    Ok(DcEstimate {
        z,
        spread: (extrapolated - samples[3].1).norm(),
        samples,
        extrapolated,
    })
}

/// One evaluation of `ζ̂(z) = −b(1−z) e^{P̂(z)}` next to the direct value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZetaFromB {
    pub z: ComplexValue,
    pub n_primes: u64,
    pub b: ComplexValue,
    pub p_hat: ComplexValue,
    pub value: ComplexValue,
    pub reference: ComplexValue,
    pub abs_err: f64,
    /// `b(1−z)` vanished; `value` is reported as 0 and `p_hat` is not used.
    pub b_vanishes: bool,
}

pub fn zeta_from_b(z: ComplexValue, n_primes: usize, table: &PrimeTable) -> Result<ZetaFromB> {
    if !(z.re > 0.0 && z.re < 1.0) {
        return Err(Error::Domain(format!(
            "zeta_from_b needs 0 < Re z < 1, got {}",
            format_complex(z)
        )));
    }
    let b = b_value(1.0 - z)?;
    let reference = zeta_hat(z)?;
    let ph = p_hat(z, n_primes, table)?;
    let b_vanishes = b.norm() < B_ZERO_EPS;
    let value = if b_vanishes { c64(0.0, 0.0) } else { -b * ph.exp() };
    Ok(ZetaFromB {
        z,
        n_primes: n_primes as u64,
        b,
        p_hat: ph,
        value,
        reference,
        abs_err: (value - reference).norm(),
        b_vanishes,
    })
}
