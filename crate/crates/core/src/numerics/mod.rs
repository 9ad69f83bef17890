//! Complex scalar helpers and the special functions shared by every other
//! module: Γ, log Γ, the generalized binomial coefficient and the
//! functional-equation factor
//!
//! ```text
//! H(z) = 2 Γ(1 − z) (2π)^(z − 1) sin(πz/2),   ζ(z) = H(z) ζ(1 − z).
//! ```
//!
//! All branches are principal. `p^(−z)` is always `exp(−z log p)` with a real
//! logarithm.

mod quad;
mod sum;

use std::f64::consts::PI;

pub use num::complex::Complex64;
pub use quad::{integrate, QuadResult};
pub use sum::KahanSum;

use crate::error::{Error, Result};

/// The universal scalar for analytic evaluations.
pub type ComplexValue = Complex64;

/// Distance below which an argument counts as sitting on an integer pole.
pub const POLE_EPS: f64 = 1e-12;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

#[inline]
pub fn c64(re: f64, im: f64) -> ComplexValue {
    Complex64::new(re, im)
}

#[inline]
pub fn real(re: f64) -> ComplexValue {
    Complex64::new(re, 0.0)
}

/// `base^(−z)` for a positive real base.
#[inline]
pub fn pow_neg(base: f64, z: ComplexValue) -> ComplexValue {
    (-z * base.ln()).exp()
}

/// `base^z` for a positive real base.
#[inline]
pub fn pow_real_base(base: f64, z: ComplexValue) -> ComplexValue {
    (z * base.ln()).exp()
}

pub fn is_finite(z: ComplexValue) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

pub fn finite_or(z: ComplexValue, what: &'static str) -> Result<ComplexValue> {
    if is_finite(z) {
        Ok(z)
    } else {
        Err(Error::NonFinite(what))
    }
}

/// Nearest integer to `z` if `z` lies within `eps` of it.
pub fn near_integer(z: ComplexValue, eps: f64) -> Option<i64> {
    let k = z.re.round();
    if (z - real(k)).norm() < eps {
        Some(k as i64)
    } else {
        None
    }
}

/// Relative distance `|a − b| / max(|b|, tiny)`.
pub fn rel_diff(a: ComplexValue, b: ComplexValue) -> f64 {
    let scale = b.norm().max(f64::MIN_POSITIVE);
    (a - b).norm() / scale
}

/// Formats a complex number as `a+bi` / `a-bi`, the literal syntax accepted
/// by [`parse_complex`].
pub fn format_complex(z: ComplexValue) -> String {
    if z.im < 0.0 || (z.im == 0.0 && z.im.is_sign_negative()) {
        format!("{}-{}i", short(z.re), short(-z.im))
    } else {
        format!("{}+{}i", short(z.re), short(z.im))
    }
}

/// Shortest round-trip digits; exponent form outside `[1e-5, 1e16)`.
fn short(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` with optional whitespace. `i` alone
/// means `1i`.
pub fn parse_complex(text: &str) -> Result<ComplexValue> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::InvalidInput(format!("cannot parse complex literal {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix(['i', 'j']) else {
        return s.parse::<f64>().map(real).map_err(|_| bad());
    };
    // split at the last sign that is not part of an exponent or the leading sign
    let bytes = body.as_bytes();
    let mut split = None;
    for idx in (1..bytes.len()).rev() {
        let c = bytes[idx];
        if (c == b'+' || c == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
            split = Some(idx);
            break;
        }
    }
    let parse_imag = |t: &str| -> Result<f64> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => t.parse::<f64>().map_err(|_| bad()),
        }
    };
    match split {
        Some(idx) => {
            let re = body[..idx].parse::<f64>().map_err(|_| bad())?;
            let im = parse_imag(&body[idx..])?;
            Ok(c64(re, im))
        }
        None => Ok(c64(0.0, parse_imag(body)?)),
    }
}

fn lanczos_right(z: ComplexValue) -> ComplexValue {
    let zm = z - 1.0;
    let mut series = real(LANCZOS_COEF[0]);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        series += c / (zm + i as f64);
    }
    let t = zm + LANCZOS_G + 0.5;
    let log_val = 0.5 * (2.0 * PI).ln() + (zm + 0.5) * t.ln() - t;
    log_val.exp() * series
}

/// Γ(z) via the Lanczos approximation (g = 7, 9 terms), with the reflection
/// formula for `Re z < 1/2`.
pub fn gamma(z: ComplexValue) -> Result<ComplexValue> {
    if let Some(k) = near_integer(z, POLE_EPS) {
        if k <= 0 {
            return Err(Error::Pole(format_complex(z)));
        }
    }
    let value = if z.re < 0.5 {
        let s = (PI * z).sin();
        real(PI) / (s * lanczos_right(1.0 - z))
    } else {
        lanczos_right(z)
    };
    finite_or(value, "gamma")
}

/// Principal-branch log Γ(z) for `Re z > 0`, continuous along vertical lines.
/// Shifts the argument up with the recurrence, then applies Stirling's series.
pub fn ln_gamma(z: ComplexValue) -> Result<ComplexValue> {
    if z.re <= 0.0 {
        return Err(Error::Domain(format!(
            "ln_gamma requires Re z > 0, got {}",
            format_complex(z)
        )));
    }
    // B_2k / (2k (2k-1)) for k = 1..8
    const STIRLING: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
        -3617.0 / 122_400.0,
    ];
    let mut w = z;
    let mut shift = real(0.0);
    while w.norm() < 18.0 {
        shift += w.ln();
        w += 1.0;
    }
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut corr = real(0.0);
    let mut pw = inv;
    for c in STIRLING {
        corr += c * pw;
        pw *= inv2;
    }
    let value = (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + corr - shift;
    finite_or(value, "ln_gamma")
}

/// Generalized binomial coefficient `C(z, r) = z(z−1)···(z−r+1)/r!`, evaluated
/// as a falling-factorial product so it never touches a Γ pole.
pub fn binom(z: ComplexValue, r: u32) -> ComplexValue {
    let mut acc = real(1.0);
    for j in 0..r {
        // multiply first, then divide: exact for small integer arguments
        acc = acc * (z - j as f64) / (j as f64 + 1.0);
    }
    acc
}

/// The functional-equation factor `H(z) = 2Γ(1−z)(2π)^(z−1) sin(πz/2)`.
///
/// At even positive integers the Γ pole cancels against the zero of the
/// sine and the limit `H(2m) = (−1)^m π (2π)^(2m−1) / (2m−1)!` is returned.
/// Odd positive integers are genuine singularities.
pub fn h_factor(z: ComplexValue) -> Result<ComplexValue> {
    if let Some(k) = near_integer(z, POLE_EPS) {
        if k >= 1 {
            if k % 2 == 1 {
                return Err(Error::Singular(format_complex(z)));
            }
            let m = k / 2;
            let mut fact = 1.0;
            for j in 2..k {
                fact *= j as f64;
            }
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            let value = sign * PI * (2.0 * PI).powi((k - 1) as i32) / fact;
            return Ok(real(value));
        }
    }
    let g = gamma(1.0 - z)?;
    let value = 2.0 * g * pow_real_base(2.0 * PI, z - 1.0) * (PI * z / 2.0).sin();
    finite_or(value, "h_factor")
}

/// The phase θ(t) with `e^{iθ(t)} ζ(1/2 + it)` real, equal to
/// `Im log Γ(1/4 + it/2) − (t/2) log π`. It satisfies
/// `H(1/2 + it) = e^{−2iθ(t)}`.
pub fn critical_phase(t: f64) -> Result<f64> {
    let lg = ln_gamma(c64(0.25, 0.5 * t))?;
    Ok(lg.im - 0.5 * t * PI.ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: ComplexValue, b: ComplexValue, tol: f64) -> bool {
        rel_diff(a, b) < tol
    }

    #[test]
    fn gamma_reference_values() {
        assert!((gamma(real(1.0)).unwrap() - 1.0).norm() < 1e-14);
        let half = gamma(real(0.5)).unwrap();
        assert!((half.re - PI.sqrt()).abs() < 1e-13);
        // mpmath, 30 digits
        let want = c64(0.480_309_915_674_123_1, 3.317_663_519_900_285_5);
        assert!(close(gamma(c64(3.7, 1.2)).unwrap(), want, 1e-11));
        assert!(close(gamma(real(-0.5)).unwrap(), real(-2.0 * PI.sqrt()), 1e-13));
    }

    #[test]
    fn gamma_poles() {
        assert!(matches!(gamma(real(0.0)), Err(Error::Pole(_))));
        assert!(matches!(gamma(real(-3.0)), Err(Error::Pole(_))));
        assert!(gamma(real(-3.0 + 1e-6)).is_ok());
    }

    #[test]
    fn gamma_recurrence_grid() {
        for i in -8..8 {
            for j in -6..6 {
                let z = c64(0.37 + 2.3 * i as f64, 1.7 * j as f64 + 0.1);
                let lhs = gamma(z + 1.0).unwrap();
                let rhs = z * gamma(z).unwrap();
                assert!(close(rhs, lhs, 1e-10), "z = {z}");
            }
        }
    }

    #[test]
    fn ln_gamma_matches_gamma() {
        for &z in &[c64(0.25, 7.0), c64(2.5, -3.0), c64(0.7, 0.1), c64(10.0, 30.0)] {
            let a = ln_gamma(z).unwrap().exp();
            assert!(close(a, gamma(z).unwrap(), 1e-12), "z = {z}");
        }
    }

    #[test]
    fn binom_values() {
        assert_eq!(binom(c64(3.3, -1.0), 0), real(1.0));
        assert_eq!(binom(real(5.0), 2), real(10.0));
        assert_eq!(binom(real(0.5), 2), real(-0.125));
        assert_eq!(binom(real(3.0), 5), real(0.0));
    }

    #[test]
    fn binom_pascal_exact() {
        let mut row = vec![1u64];
        for n in 0..=20u32 {
            for (r, &v) in row.iter().enumerate() {
                assert_eq!(binom(real(n as f64), r as u32), real(v as f64));
            }
            let mut next = vec![1u64; row.len() + 1];
            for k in 1..row.len() {
                next[k] = row[k - 1] + row[k];
            }
            row = next;
        }
    }

    #[test]
    fn h_factor_special_points() {
        assert!((h_factor(real(0.5)).unwrap() - 1.0).norm() < 1e-14);
        let want = -1.0 / (2.0 * PI * PI);
        assert!(close(h_factor(real(-1.0)).unwrap(), real(want), 1e-13));
        assert!(matches!(h_factor(real(3.0)), Err(Error::Singular(_))));
        assert!(matches!(h_factor(real(1.0)), Err(Error::Singular(_))));
        // H(2) = −2π², from ζ(2) = H(2) ζ(−1)
        assert!(close(h_factor(real(2.0)).unwrap(), real(-2.0 * PI * PI), 1e-13));
        // the limit form agrees with the direct formula just off the integer
        let near = h_factor(real(4.0 + 1e-7)).unwrap();
        assert!(close(near, h_factor(real(4.0)).unwrap(), 1e-5));
    }

    #[test]
    fn h_factor_ratio_identity() {
        let z = c64(0.3, 0.7);
        let ratio = h_factor(z + 2.0).unwrap() / h_factor(z).unwrap();
        let want = -4.0 * PI * PI / (z * (z + 1.0));
        assert!((ratio - want).norm() < 1e-10);
    }

    #[test]
    fn phase_reproduces_h_factor() {
        for &t in &[0.5, 3.0, 14.134725, 50.0, 200.0] {
            let theta = critical_phase(t).unwrap();
            let h = h_factor(c64(0.5, t)).unwrap();
            let e = c64(0.0, -2.0 * theta).exp();
            assert!((h - e).norm() < 1e-10, "t = {t}");
        }
    }

    #[test]
    fn parse_complex_forms() {
        assert_eq!(parse_complex("0.5").unwrap(), real(0.5));
        assert_eq!(parse_complex("0.5+14.134725i").unwrap(), c64(0.5, 14.134725));
        assert_eq!(parse_complex(" 2 - 3i ").unwrap(), c64(2.0, -3.0));
        assert_eq!(parse_complex("-i").unwrap(), c64(0.0, -1.0));
        assert_eq!(parse_complex("1e-3-2e+1i").unwrap(), c64(1e-3, -20.0));
        assert_eq!(parse_complex("-4.5i").unwrap(), c64(0.0, -4.5));
        assert!(parse_complex("abc").is_err());
        assert!(parse_complex("").is_err());
        for z in [c64(8.881784197001252e-16, -3e20), c64(-1e-300, 2.5e-7), c64(0.0, -0.0)] {
            assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
        }
        assert_eq!(format_complex(c64(8.9e-16, 1.0)), "8.9e-16+1i");
        let z = c64(-0.25, -7.5);
        assert_eq!(parse_complex(&format_complex(z)).unwrap(), z);
    }
}
