//! The prime zeta function `P(z) = Σ_p p^(−z)` and its relatives: partial
//! sums, the integral-subtracted regularization
//!
//! ```text
//! P̂_n(z) = P_n(z) − ∫_1^n dt / (t log t)^z,      0 < Re z < 1,
//! ```
//!
//! the Möbius inversion of `log ζ(z) = Σ_m P(mz)/m` over squarefree products
//! of small primes, and the remainder `R(z) = Σ_{m≥2} P(mz)/m`.

use num::{BigRational, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bernoulli::{b_partial_poly, rat_int, rational_to_f64};
use crate::error::{Error, Result};
use crate::numerics::{format_complex, integrate, pow_neg, real, ComplexValue, KahanSum};
use crate::primes::PrimeTable;
use crate::report::ConvergenceTable;
use crate::zeta_core::{log_zeta_hat, zeta_hat, zeta_minus_one};

/// Squarefree products above this value are dropped from the inversion.
pub const PRODUCT_CAP: u64 = 200;

/// Largest number of primes accepted by [`p_inclusion_exclusion`].
pub const INVERSION_PRIME_CAP: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrimeZetaMethod {
    Partial,
    Regularized,
    InclusionExclusion,
}

/// Cutoffs used to produce a value; zero where a cutoff does not apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Cutoffs {
    pub n_primes: u64,
    pub inversion_primes: u64,
    pub depth: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrimeZetaValue {
    pub z: ComplexValue,
    pub value: ComplexValue,
    pub method: PrimeZetaMethod,
    pub cutoffs: Cutoffs,
}

/// `P_n(z) = Σ_{k≤n} p_k^(−z)`, ascending, compensated.
pub fn p_partial(z: ComplexValue, n: usize, table: &PrimeTable) -> Result<ComplexValue> {
    Ok(table
        .first(n)?
        .iter()
        .map(|&p| pow_neg(p as f64, z))
        .collect::<KahanSum>()
        .value())
}

fn check_strip(z: ComplexValue, what: &str) -> Result<()> {
    if z.re > 0.0 && z.re < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{what} needs 0 < Re z < 1, got {}",
            format_complex(z)
        )))
    }
}

/// `∫_1^n dt / (t log t)^z` for `0 < Re z < 1`.
///
/// With `u = log t` the integrand becomes `e^{u(1−z)} u^{−z}`. The piece over
/// `[0, min(1, log n)]` is integrated term by term from the exponential
/// series; the rest is smooth and goes to adaptive quadrature.
pub fn p_hat_integral(z: ComplexValue, n: usize) -> Result<ComplexValue> {
    check_strip(z, "p_hat")?;
    if n < 2 {
        return Err(Error::InvalidInput(format!("p_hat needs n >= 2, got {n}")));
    }
    let big_l = (n as f64).ln();
    let a = big_l.min(1.0);
    let w = 1.0 - z;

    // Σ_k w^k/k! · a^{k+1−z}/(k+1−z)
    let mut head = KahanSum::new();
    let mut coef = real(1.0); // w^k a^k / k!
    let a_pow = (w * a.ln()).exp(); // a^{1−z}
    for k in 0..400 {
        let term = coef * a_pow / (k as f64 + w);
        head.add(term);
        if k > 2 && term.norm() < 1e-18 * head.value().norm() {
            break;
        }
        coef = coef * w * a / (k as f64 + 1.0);
    }

    let mut total = head.value();
    if big_l > a {
        let f = |u: f64| (w * u).exp() * (-z * u.ln()).exp();
        let scale = (big_l * w.re).exp().max(1.0) * (1.0 + big_l);
        total += integrate(f, a, big_l, 1e-14 * scale).value;
    }
    crate::numerics::finite_or(total, "p_hat integral")
}

/// `P̂_n(z) = P_n(z) − ∫_1^n dt/(t log t)^z` over the first `n` primes.
pub fn p_hat(z: ComplexValue, n: usize, table: &PrimeTable) -> Result<ComplexValue> {
    let integral = p_hat_integral(z, n)?;
    Ok(p_partial(z, n, table)? - integral)
}

/// `P̂_n(z)` across a ladder of cutoffs; the reference column holds the value
/// at the largest cutoff.
pub fn p_hat_table(z: ComplexValue, ladder: &[usize], table: &PrimeTable) -> Result<ConvergenceTable> {
    let values = ladder
        .iter()
        .map(|&n| p_hat(z, n, table))
        .collect::<Result<Vec<_>>>()?;
    let reference = values.last().copied().unwrap_or(real(0.0));
    let mut out = ConvergenceTable::new(z, "p-hat");
    for (&n, v) in ladder.iter().zip(values) {
        out.push(n as u64, v, reference)?;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogDeviationRow {
    pub z: f64,
    pub n: u64,
    pub p_hat: ComplexValue,
    /// `log(1/(1−z))`
    pub log_term: f64,
    pub deviation: ComplexValue,
}

/// `P̂_n(z) − log(1/(1−z))` at real points of the strip.
pub fn p_hat_log_deviation(zs: &[f64], n: usize, table: &PrimeTable) -> Result<Vec<LogDeviationRow>> {
    zs.iter()
        .map(|&x| {
            let v = p_hat(real(x), n, table)?;
            let log_term = -(1.0 - x).ln();
            Ok(LogDeviationRow {
                z: x,
                n: n as u64,
                p_hat: v,
                log_term,
                deviation: v - log_term,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InversionTerm {
    /// Squarefree product `d` of distinct primes.
    pub d: u64,
    pub factors: Vec<u64>,
    /// `μ(d) = (−1)^k`
    pub sign: i8,
    pub log_zeta: ComplexValue,
    /// `Re(dz) ≤ 1`: the log ζ argument lies outside the convergence region
    /// of the Euler product.
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InclusionExclusion {
    pub result: PrimeZetaValue,
    /// Kept terms in increasing `d`.
    pub terms: Vec<InversionTerm>,
    /// Number of admissible products above [`PRODUCT_CAP`].
    pub dropped_terms: f64,
    /// Upper bound on the total modulus of the dropped terms.
    pub dropped_bound: f64,
}

/// Squarefree products of at most `depth` of `primes`, each `≤ cap`, in
/// increasing order, with their prime factors.
fn squarefree_products(primes: &[u64], depth: usize, cap: u64) -> Vec<(u64, Vec<u64>)> {
    fn walk(primes: &[u64], start: usize, depth: usize, cap: u64, d: u64, fs: &mut Vec<u64>, out: &mut Vec<(u64, Vec<u64>)>) {
        out.push((d, fs.clone()));
        if fs.len() == depth {
            return;
        }
        for i in start..primes.len() {
            let next = d * primes[i];
            if next > cap {
                break;
            }
            fs.push(primes[i]);
            walk(primes, i + 1, depth, cap, next, fs, out);
            fs.pop();
        }
    }
    let mut out = Vec::new();
    walk(primes, 0, depth, cap, 1, &mut Vec::new(), &mut out);
    out.sort_by_key(|t| t.0);
    out
}

/// `Σ_{k≤depth} C(m, k)` in floating point.
fn subset_count(m: usize, depth: usize) -> f64 {
    let mut c = 1.0;
    let mut total = 1.0;
    for k in 1..=depth.min(m) {
        c = c * (m - k + 1) as f64 / k as f64;
        total += c;
    }
    total
}

/// `|log ζ(w)| ≤ ζ(σ) − 1 ≤ 2^{−σ}(1 + 2/(σ − 1))` for `σ = Re w > 1`.
fn log_zeta_bound(sigma: f64) -> f64 {
    2f64.powf(-sigma) * (1.0 + 2.0 / (sigma - 1.0))
}

/// `P(z) ≈ Σ_d μ(d)/d · log ζ(dz)` over squarefree `d` built from the first
/// `m_primes` primes with at most `depth` factors and `d ≤ 200`.
pub fn p_inclusion_exclusion(z: ComplexValue, m_primes: usize, depth: usize) -> Result<InclusionExclusion> {
    if z.re <= 0.5 {
        return Err(Error::Domain(format!(
            "inclusion-exclusion needs Re z > 1/2, got {}",
            format_complex(z)
        )));
    }
    if m_primes > INVERSION_PRIME_CAP {
        return Err(Error::Capacity {
            requested: m_primes as u64,
            cap: INVERSION_PRIME_CAP as u64,
        });
    }
    let primes = if m_primes == 0 {
        Vec::new()
    } else {
        PrimeTable::sieve_to_count(m_primes as u64)?.as_slice().to_vec()
    };
    let products = squarefree_products(&primes, depth, PRODUCT_CAP);
    let terms = products
        .into_par_iter()
        .map(|(d, factors)| {
            let w = z * d as f64;
            Ok(InversionTerm {
                d,
                sign: if factors.len() % 2 == 0 { 1 } else { -1 },
                factors,
                log_zeta: log_zeta_hat(w)?,
                flagged: w.re <= 1.0,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut acc = KahanSum::new();
    for t in &terms {
        acc.add(t.log_zeta * (t.sign as f64 / t.d as f64));
    }
    let dropped_terms = subset_count(primes.len(), depth) - terms.len() as f64;
    let sigma = (PRODUCT_CAP + 1) as f64 * z.re;
    let dropped_bound = dropped_terms * log_zeta_bound(sigma) / (PRODUCT_CAP + 1) as f64;
    Ok(InclusionExclusion {
        result: PrimeZetaValue {
            z,
            value: acc.value(),
            method: PrimeZetaMethod::InclusionExclusion,
            cutoffs: Cutoffs {
                n_primes: 0,
                inversion_primes: m_primes as u64,
                depth: depth as u64,
            },
        },
        terms,
        dropped_terms,
        dropped_bound,
    })
}

/// Exact coefficient of `P(mz)` left after the truncated inversion, for
/// `m = 2..=m_max`: `(1/m) Σ μ(d)` over kept `d | m`. Zero whenever some
/// prime factor of `m` is among the inversion primes and the depth and
/// product cap keep every relevant divisor.
pub fn inversion_residuals(m_primes: usize, depth: usize, m_max: u64) -> Result<Vec<(u64, BigRational)>> {
    let primes = if m_primes == 0 {
        Vec::new()
    } else {
        PrimeTable::sieve_to_count(m_primes as u64)?.as_slice().to_vec()
    };
    let kept = squarefree_products(&primes, depth, PRODUCT_CAP);
    Ok((2..=m_max)
        .map(|m| {
            let c = kept
                .iter()
                .filter(|(d, _)| m % d == 0)
                .fold(BigRational::zero(), |acc, (d, fs)| {
                    // μ(d)/d · 1/(m/d)
                    let mu = if fs.len() % 2 == 0 { 1 } else { -1 };
                    acc + rat_int(mu) / rat_int(*d as i64) / rat_int((m / d) as i64)
                });
            (m, c)
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Remainder {
    pub z: ComplexValue,
    pub depth: u64,
    pub n_primes: u64,
    pub value: ComplexValue,
    /// `2^{−depth·Re z}`, the size of the first omitted order.
    pub tail_bound: f64,
    /// Bound on the prime-sum truncation, `Σ_m p_n^{1−mσ}/(m(mσ−1))`.
    pub truncation_bound: f64,
}

/// `R(z) ≈ Σ_{m=2}^{depth} P(mz)/m` with each `P` summed over the first
/// `n_primes` primes.
pub fn r_remainder(z: ComplexValue, depth: usize, n_primes: usize, table: &PrimeTable) -> Result<Remainder> {
    if z.re <= 0.5 {
        return Err(Error::Domain(format!(
            "remainder needs Re z > 1/2, got {}",
            format_complex(z)
        )));
    }
    let primes = table.first(n_primes)?;
    let parts = (2..=depth.max(1))
        .into_par_iter()
        .map(|m| {
            let w = z * m as f64;
            primes
                .iter()
                .map(|&p| pow_neg(p as f64, w))
                .collect::<KahanSum>()
                .value()
                / m as f64
        })
        .collect::<Vec<_>>();
    let value = parts.into_iter().collect::<KahanSum>().value();
    let pn = primes.last().copied().unwrap_or(1) as f64;
    let truncation_bound = (2..=depth)
        .map(|m| {
            let s = m as f64 * z.re;
            pn.powf(1.0 - s) / (m as f64 * (s - 1.0))
        })
        .sum();
    Ok(Remainder {
        z,
        depth: depth as u64,
        n_primes: n_primes as u64,
        value,
        tail_bound: 2f64.powf(-(depth as f64) * z.re),
        truncation_bound,
    })
}

/// `Σ_{k=2}^{K} (ζ(k) − 1)/k`, which tends to `1 − γ`.
pub fn gamma_series(k_max: u32) -> Result<f64> {
    let mut acc = KahanSum::new();
    for k in 2..=k_max {
        acc.add(zeta_minus_one(real(k as f64))? / k as f64);
    }
    Ok(acc.value().re)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecialValueRow {
    pub z: f64,
    pub claimed: f64,
    pub computed: ComplexValue,
    pub abs_err: f64,
    /// Cutoff of the `b_n` partial sum.
    pub b_cutoff: u64,
    pub b: f64,
    pub zeta_hat: f64,
    pub flag: Option<String>,
}

/// Cutoff for the `b_n(1−z)` sum in [`special_values_report`].
pub const SPECIAL_B_CUTOFF: usize = 40;

/// `P̂(z) = log(−ζ̂(z)/b(1−z))` at `z = 0, −1, −3` against the values
/// `0, −log 2, −log 4`.
pub fn special_values_report() -> Result<Vec<SpecialValueRow>> {
    let bpoly = b_partial_poly(SPECIAL_B_CUTOFF)?;
    let claims = [(0.0, 0.0), (-1.0, -(2f64.ln())), (-3.0, -(4f64.ln()))];
    claims
        .iter()
        .map(|&(z, claimed)| {
            let b = rational_to_f64(&bpoly.eval(&rat_int((1.0 - z) as i64)));
            let zh = zeta_hat(real(z))?.re;
            let ratio = -zh / b;
            let (computed, flag) = if b == 0.0 {
                (real(f64::NAN), Some("b(1-z) vanishes".to_string()))
            } else if ratio <= 0.0 {
                (real(ratio).ln(), Some("negative ratio, principal branch".to_string()))
            } else {
                (real(ratio.ln()), None)
            };
            Ok(SpecialValueRow {
                z,
                claimed,
                abs_err: (computed - claimed).norm(),
                computed,
                b_cutoff: SPECIAL_B_CUTOFF as u64,
                b,
                zeta_hat: zh,
                flag,
            })
        })
        .collect()
}
