//! Zeros on the critical line, bracketed by sign changes of the real function
//! `Z(t) = Re[e^{iθ(t)} ζ̂(1/2 + it)]` and refined by bisection.

use rayon::prelude::*;

use super::zeta_hat;
use crate::error::{Error, Result};
use crate::numerics::{c64, critical_phase};

pub const DEFAULT_SCAN_STEP: f64 = 0.05;

/// Bracket width at which bisection stops.
const REFINE_WIDTH: f64 = 1e-10;

/// Subdivision factor used to re-examine a suspicious step.
const RESAMPLE: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroScan {
    pub ordinates: Vec<f64>,
    /// Steps where a pair of sign changes hid inside one step and was only
    /// found by resampling.
    pub warnings: Vec<String>,
}

/// Hardy's function `Z(t)`, real on the critical line.
pub fn hardy_z(t: f64) -> Result<f64> {
    let theta = critical_phase(t)?;
    let v = zeta_hat(c64(0.5, t))?;
    Ok((c64(0.0, theta).exp() * v).re)
}

fn bisect(mut lo: f64, mut hi: f64, mut f_lo: f64) -> Result<f64> {
    while hi - lo > REFINE_WIDTH {
        let mid = 0.5 * (lo + hi);
        let f_mid = hardy_z(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn grid(t_min: f64, t_max: f64, step: f64) -> Vec<f64> {
    let count = ((t_max - t_min) / step).floor() as usize;
    let mut ts: Vec<f64> = (0..=count).map(|i| t_min + i as f64 * step).collect();
    if *ts.last().unwrap() < t_max {
        ts.push(t_max);
    }
    ts
}

fn sample(ts: &[f64]) -> Result<Vec<f64>> {
    ts.par_iter().map(|&t| hardy_z(t)).collect()
}

fn brackets(ts: &[f64], zs: &[f64]) -> Vec<(f64, f64, f64)> {
    (0..ts.len() - 1)
        .filter(|&i| zs[i] == 0.0 || (zs[i] < 0.0) != (zs[i + 1] < 0.0))
        .map(|i| (ts[i], ts[i + 1], zs[i]))
        .collect()
}

fn refine_all(br: &[(f64, f64, f64)]) -> Result<Vec<f64>> {
    br.par_iter()
        .map(|&(lo, hi, f_lo)| if f_lo == 0.0 { Ok(lo) } else { bisect(lo, hi, f_lo) })
        .collect()
}

/// Ordinates of critical-line zeros in `[t_min, t_max]`.
///
/// Local minima of `|Z|` without a sign change are resampled at a tenth of
/// the step; any zeros found there are kept and reported in `warnings`.
pub fn scan_zeros(t_min: f64, t_max: f64, step: f64) -> Result<ZeroScan> {
    if !(t_min > 0.0 && t_min < t_max) {
        return Err(Error::InvalidInput(format!(
            "scan range must satisfy 0 < t_min < t_max, got [{t_min}, {t_max}]"
        )));
    }
    if step.is_nan() || step <= 0.0 {
        return Err(Error::InvalidInput(format!("scan step must be positive, got {step}")));
    }
    let ts = grid(t_min, t_max, step);
    let zs = sample(&ts)?;
    let mut ordinates = refine_all(&brackets(&ts, &zs))?;
    let mut warnings = Vec::new();

    for i in 1..ts.len().saturating_sub(1) {
        let same_sign = (zs[i - 1] < 0.0) == (zs[i] < 0.0) && (zs[i] < 0.0) == (zs[i + 1] < 0.0);
        let dip = zs[i].abs() < zs[i - 1].abs() && zs[i].abs() < zs[i + 1].abs();
        if !(same_sign && dip) {
            continue;
        }
        let fine = grid(ts[i - 1], ts[i + 1], (ts[i + 1] - ts[i - 1]) / (2 * RESAMPLE) as f64);
        let fz = sample(&fine)?;
        let extra = refine_all(&brackets(&fine, &fz))?;
        if !extra.is_empty() {
            warnings.push(format!(
                "step {step} too coarse near t = {:.6}: {} sign changes inside [{:.6}, {:.6}]",
                ts[i],
                extra.len(),
                ts[i - 1],
                ts[i + 1]
            ));
            ordinates.extend(extra);
        }
    }
    ordinates.sort_by(f64::total_cmp);
    ordinates.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    Ok(ZeroScan {
        ordinates,
        warnings,
    })
}
