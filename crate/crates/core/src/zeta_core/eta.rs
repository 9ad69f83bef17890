//! Regularized zeta through the alternating (eta) series
//! `ζ̂(z) = η(z) / (1 − 2^(1−z))`, with Borwein's Chebyshev acceleration of
//! the alternating sum.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::{
    format_complex, h_factor, near_integer, pow_neg, pow_real_base, real, ComplexValue, KahanSum,
    POLE_EPS,
};

/// Threshold on `|1 − 2^(1−z)|` below which the eta route is refused.
pub const NEAR_POLE_EPS: f64 = 1e-8;

const MIN_ORDER: usize = 30;

/// Acceleration order for a target absolute error of roughly 1e-16 at
/// imaginary part `t`, from the bound `3(1+2|t|) e^{π|t|/2} / (3+√8)^n`.
pub fn borwein_order(t: f64) -> usize {
    let t = t.abs();
    let rate = (3.0 + 8f64.sqrt()).ln();
    let need = 0.5 * PI * t + (3.0 * (1.0 + 2.0 * t)).ln() + 37.0;
    ((need / rate).ceil() as usize).max(MIN_ORDER)
}

/// Normalized Borwein weights `w_k = 1 − d_k / d_n`, k = 0..n−1, computed in
/// log space so large orders do not overflow.
pub fn borwein_weights(n: usize) -> Vec<f64> {
    let nf = n as f64;
    let mut log_e = Vec::with_capacity(n + 1);
    log_e.push(0.0f64);
    for i in 0..n {
        let fi = i as f64;
        let step = (4.0 * (nf + fi) * (nf - fi)).ln() - ((2.0 * fi + 1.0) * (2.0 * fi + 2.0)).ln();
        log_e.push(log_e[i] + step);
    }
    let peak = log_e.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = log_e.iter().map(|l| (l - peak).exp()).collect();
    // suffix sums: tail[k] = sum_{i >= k} e_i
    let mut tail = vec![0.0; n + 2];
    for i in (0..=n).rev() {
        tail[i] = tail[i + 1] + e[i];
    }
    let total = tail[0];
    (0..n).map(|k| tail[k + 1] / total).collect()
}

/// Accelerated `η(z) = Σ (−1)^(k−1) k^(−z)` with the given order.
pub fn eta_accelerated(z: ComplexValue, order: usize) -> ComplexValue {
    let w = borwein_weights(order);
    let mut acc = KahanSum::new();
    for (k, wk) in w.iter().enumerate() {
        let term = *wk * pow_neg((k + 1) as f64, z);
        acc.add(if k % 2 == 0 { term } else { -term });
    }
    acc.value()
}

/// The regularized zeta function ζ̂(z).
///
/// For `Re z ≥ 0` the accelerated eta series is used directly; for
/// `Re z < 0` the functional equation `ζ̂(z) = H(z) ζ̂(1 − z)` maps the
/// argument into the right half-plane.
pub fn zeta_hat(z: ComplexValue) -> Result<ComplexValue> {
    if near_integer(z, POLE_EPS) == Some(1) {
        return Err(Error::Pole(format_complex(z)));
    }
    if z.re < 0.0 {
        if let Some(k) = near_integer(z, POLE_EPS) {
            if k < 0 && k % 2 == 0 {
                return Ok(real(0.0));
            }
        }
        return Ok(h_factor(z)? * zeta_hat(1.0 - z)?);
    }
    let denom = 1.0 - pow_real_base(2.0, 1.0 - z);
    if denom.norm() < NEAR_POLE_EPS {
        return Err(Error::NearPole {
            z: format_complex(z),
            detail: format!("|1 - 2^(1-z)| = {:e}", denom.norm()),
        });
    }
    let eta = eta_accelerated(z, borwein_order(z.im));
    crate::numerics::finite_or(eta / denom, "zeta_hat")
}

/// `ζ(z) − 1` by direct summation, for `Re z ≥ 8` where the series
/// converges fast and the subtraction would otherwise lose every digit.
fn zeta_minus_one_direct(z: ComplexValue) -> ComplexValue {
    let lead = pow_neg(2.0, z).norm();
    let mut acc = KahanSum::new();
    let mut k = 2u64;
    loop {
        let term = pow_neg(k as f64, z);
        acc.add(term);
        if term.norm() < 1e-18 * lead {
            break;
        }
        k += 1;
    }
    acc.value()
}

/// `ζ̂(z) − 1` without cancellation for large `Re z`.
pub fn zeta_minus_one(z: ComplexValue) -> Result<ComplexValue> {
    if z.re >= 8.0 {
        Ok(zeta_minus_one_direct(z))
    } else {
        Ok(zeta_hat(z)? - 1.0)
    }
}

/// `log ζ̂(z)` on the principal branch.
pub fn log_zeta_hat(z: ComplexValue) -> Result<ComplexValue> {
    if z.re >= 8.0 {
        let x = zeta_minus_one_direct(z);
        // log(1 + x), |x| < 0.005
        let mut acc = KahanSum::new();
        let mut pw = x;
        for k in 1..60 {
            let term = pw / k as f64;
            acc.add(if k % 2 == 1 { term } else { -term });
            pw *= x;
            if pw.norm() < 1e-30 * x.norm() {
                break;
            }
        }
        return Ok(acc.value());
    }
    Ok(zeta_hat(z)?.ln())
}
