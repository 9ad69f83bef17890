//! Truncated and regularized zeta evaluations: partial sums `ζ_n^Σ`, partial
//! Euler products `ζ_n^Π`, the alternating partial sums `ξ_n`, the cutoff
//! regularization, the window ratio `f_n(z) = ζ_{2n}^Π / ζ_n^Π`, the two
//! reconstruction formulas for `ζ̂_n`, symmetrized window log sums and the
//! gap `σ_n = ζ_n^Σ − ζ_n^Π`.
//!
//! Limit statements about these quantities are exposed as
//! [`ConvergenceTable`]s, never as assertions.

mod eta;
mod scan;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use eta::{borwein_order, borwein_weights, eta_accelerated, log_zeta_hat, zeta_hat, zeta_minus_one, NEAR_POLE_EPS};
pub use scan::{hardy_z, scan_zeros, ZeroScan, DEFAULT_SCAN_STEP};

use crate::error::{Error, Result};
use crate::numerics::{finite_or, format_complex, near_integer, pow_neg, pow_real_base, real};
use crate::numerics::{ComplexValue, KahanSum, POLE_EPS};
use crate::primes::PrimeTable;
use crate::report::ConvergenceTable;

/// Factors below this modulus are treated as vanishing.
pub const VANISHING_FACTOR_EPS: f64 = 1e-300;

/// Threshold on `|f_n(z) − 1|` for the ratio reconstruction.
pub const DEGENERATE_RATIO_EPS: f64 = 1e-14;

/// Fixed chunk length for window products. Chunks are reduced in index
/// order, so the result does not depend on the number of worker threads.
pub const PRODUCT_CHUNK: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TruncationMethod {
    PartialSum,
    EulerProduct,
    Alternating,
    CutoffRegularized,
    RatioReconstructed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TruncationRecord {
    pub n: u64,
    pub z: ComplexValue,
    pub value: ComplexValue,
    pub method: TruncationMethod,
}

impl TruncationRecord {
    /// Evaluates `method` at `(z, n)`.
    pub fn evaluate(
        method: TruncationMethod,
        z: ComplexValue,
        n: usize,
        table: &PrimeTable,
    ) -> Result<Self> {
        let value = match method {
            TruncationMethod::PartialSum => partial_sum(z, n),
            TruncationMethod::EulerProduct => euler_product_partial(z, n, table)?,
            TruncationMethod::Alternating => alternating_partial(z, n),
            TruncationMethod::CutoffRegularized => zeta_hat_cutoff(z, n)?,
            TruncationMethod::RatioReconstructed => zeta_hat_from_ratio(z, n, table)?,
        };
        Ok(Self {
            n: n as u64,
            z,
            value: finite_or(value, "truncation record")?,
            method,
        })
    }
}

fn check_not_one(z: ComplexValue) -> Result<()> {
    if near_integer(z, POLE_EPS) == Some(1) {
        Err(Error::Pole(format_complex(z)))
    } else {
        Ok(())
    }
}

/// `ζ_n^Σ(z) = Σ_{k=1..n} k^(−z)`, ascending, compensated.
pub fn partial_sum(z: ComplexValue, n: usize) -> ComplexValue {
    (1..=n).map(|k| pow_neg(k as f64, z)).collect::<KahanSum>().value()
}

/// `ξ_n(z) = Σ_{k=1..n} (−1)^(k−1) k^(−z)`.
pub fn alternating_partial(z: ComplexValue, n: usize) -> ComplexValue {
    (1..=n)
        .map(|k| {
            let t = pow_neg(k as f64, z);
            if k % 2 == 1 {
                t
            } else {
                -t
            }
        })
        .collect::<KahanSum>()
        .value()
}

/// Local Euler factor `(1 − p^(−z))^(−1)`.
pub fn euler_factor(p: u64, z: ComplexValue) -> Result<ComplexValue> {
    let d = 1.0 - pow_neg(p as f64, z);
    if d.norm() < VANISHING_FACTOR_EPS {
        return Err(Error::VanishingFactor { p });
    }
    Ok(1.0 / d)
}

fn sequential_product(primes: &[u64], z: ComplexValue) -> Result<ComplexValue> {
    let mut acc = real(1.0);
    for &p in primes {
        acc *= euler_factor(p, z)?;
    }
    Ok(acc)
}

/// Product of Euler factors over `primes`, evaluated chunkwise in parallel
/// and combined left to right.
pub fn euler_product_over(primes: &[u64], z: ComplexValue) -> Result<ComplexValue> {
    let partials: Vec<Result<ComplexValue>> = primes
        .par_chunks(PRODUCT_CHUNK)
        .map(|chunk| sequential_product(chunk, z))
        .collect();
    let mut acc = real(1.0);
    for part in partials {
        acc *= part?;
    }
    finite_or(acc, "euler product")
}

/// `ζ_n^Π(z) = Π_{k=1..n} (1 − p_k^(−z))^(−1)` in ascending prime order.
pub fn euler_product_partial(z: ComplexValue, n: usize, table: &PrimeTable) -> Result<ComplexValue> {
    let primes = table.first(n)?;
    finite_or(sequential_product(primes, z)?, "euler product")
}

/// `ζ̂(z)` by cutoff subtraction: `ζ_n^Σ(z) − n^(1−z)/(1−z)`.
pub fn zeta_hat_cutoff(z: ComplexValue, n: usize) -> Result<ComplexValue> {
    check_not_one(z)?;
    let one_minus = 1.0 - z;
    let sub = pow_real_base(n as f64, one_minus) / one_minus;
    finite_or(partial_sum(z, n) - sub, "cutoff regularization")
}

/// `f_n(z) = ζ_{2n}^Π(z) / ζ_n^Π(z)`, computed directly as the product over
/// the window of prime indices `n+1..=2n`.
pub fn fn_ratio(z: ComplexValue, n: usize, table: &PrimeTable) -> Result<ComplexValue> {
    euler_product_over(table.window(n)?, z)
}

/// `ζ̂_n(z) = (f_n − 2^(1−z)) / (f_n − 1) · n^(1−z) / (z − 1)`.
pub fn zeta_hat_from_ratio(z: ComplexValue, n: usize, table: &PrimeTable) -> Result<ComplexValue> {
    check_not_one(z)?;
    let f = fn_ratio(z, n, table)?;
    reconstruct(z, n, f, real(1.0))
}

/// The same reconstruction written with the two products,
/// `(ζ_{2n}^Π − 2^(1−z) ζ_n^Π) / (ζ_{2n}^Π − ζ_n^Π) · n^(1−z) / (z − 1)`,
/// each product evaluated on its own.
pub fn zeta_hat_from_products(z: ComplexValue, n: usize, table: &PrimeTable) -> Result<ComplexValue> {
    check_not_one(z)?;
    let small = euler_product_partial(z, n, table)?;
    let large = euler_product_partial(z, 2 * n, table)?;
    reconstruct(z, n, large, small)
}

fn reconstruct(
    z: ComplexValue,
    n: usize,
    numer_big: ComplexValue,
    numer_small: ComplexValue,
) -> Result<ComplexValue> {
    let two_pow = pow_real_base(2.0, 1.0 - z);
    let denom = numer_big - numer_small;
    if denom.norm() < DEGENERATE_RATIO_EPS * numer_small.norm() {
        return Err(Error::DegenerateDenominator(format!(
            "f_n(z) - 1 = {} at n = {n}",
            format_complex(denom / numer_small)
        )));
    }
    let scale = pow_real_base(n as f64, 1.0 - z) / (z - 1.0);
    finite_or(
        (numer_big - two_pow * numer_small) / denom * scale,
        "ratio reconstruction",
    )
}

/// The two halves of the symmetrized window log sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowLogSum {
    /// `Σ_k Σ_m p_k^(−mρ) / m`
    pub rho_half: ComplexValue,
    /// `Σ_k Σ_m p_k^(−m(1−ρ)) / m`
    pub mirror_half: ComplexValue,
}

impl WindowLogSum {
    pub fn total(&self) -> ComplexValue {
        self.rho_half + self.mirror_half
    }
}

/// Both halves of `Σ_{k=n+1..2n} Σ_{m=1..depth} (p_k^(−mρ) + p_k^(−m(1−ρ))) / m`.
pub fn window_log_halves(
    rho: ComplexValue,
    n: usize,
    depth: usize,
    table: &PrimeTable,
) -> Result<WindowLogSum> {
    if depth == 0 {
        return Err(Error::InvalidInput("depth must be at least 1".into()));
    }
    let window = table.window(n)?;
    let mirror = 1.0 - rho;
    let mut a = KahanSum::new();
    let mut b = KahanSum::new();
    for &p in window {
        for m in 1..=depth {
            let mf = m as f64;
            a.add(pow_neg(p as f64, mf * rho) / mf);
            b.add(pow_neg(p as f64, mf * mirror) / mf);
        }
    }
    Ok(WindowLogSum {
        rho_half: a.value(),
        mirror_half: b.value(),
    })
}

pub fn window_log_sum(
    rho: ComplexValue,
    n: usize,
    depth: usize,
    table: &PrimeTable,
) -> Result<ComplexValue> {
    Ok(window_log_halves(rho, n, depth, table)?.total())
}

/// `σ_n(z) = ζ_n^Σ(z) − ζ_n^Π(z)`.
pub fn sigma_gap(z: ComplexValue, n: usize, table: &PrimeTable) -> Result<ComplexValue> {
    Ok(partial_sum(z, n) - euler_product_partial(z, n, table)?)
}

fn ladder_table<F>(z: ComplexValue, method: &str, ladder: &[usize], reference: ComplexValue, eval: F) -> Result<ConvergenceTable>
where
    F: Fn(usize) -> Result<ComplexValue>,
{
    let mut t = ConvergenceTable::new(z, method);
    for &n in ladder {
        t.push(n as u64, eval(n)?, reference)?;
    }
    Ok(t)
}

/// `f_n(z)` across `ladder`, against the claimed limit `2^(1−z)`.
pub fn fn_ratio_table(z: ComplexValue, ladder: &[usize], table: &PrimeTable) -> Result<ConvergenceTable> {
    ladder_table(z, "fn-ratio", ladder, pow_real_base(2.0, 1.0 - z), |n| fn_ratio(z, n, table))
}

/// Ratio reconstruction across `ladder`, against `zeta_hat(z)`.
pub fn ratio_reconstruction_table(
    z: ComplexValue,
    ladder: &[usize],
    table: &PrimeTable,
) -> Result<ConvergenceTable> {
    ladder_table(z, "ratio-reconstructed", ladder, zeta_hat(z)?, |n| {
        zeta_hat_from_ratio(z, n, table)
    })
}

/// Cutoff regularization across `ladder`, against `zeta_hat(z)`.
pub fn cutoff_table(z: ComplexValue, ladder: &[usize]) -> Result<ConvergenceTable> {
    ladder_table(z, "cutoff-regularized", ladder, zeta_hat(z)?, |n| zeta_hat_cutoff(z, n))
}

/// Symmetrized window log sums across `ladder`, against the claimed limit `log 2`.
pub fn window_log_sum_table(
    rho: ComplexValue,
    ladder: &[usize],
    depth: usize,
    table: &PrimeTable,
) -> Result<ConvergenceTable> {
    ladder_table(rho, "window-log-sum", ladder, real(2f64.ln()), |n| {
        window_log_sum(rho, n, depth, table)
    })
}

/// `σ_n(z)` across `ladder`, against 0.
pub fn sigma_gap_table(z: ComplexValue, ladder: &[usize], table: &PrimeTable) -> Result<ConvergenceTable> {
    ladder_table(z, "sigma-gap", ladder, real(0.0), |n| sigma_gap(z, n, table))
}
