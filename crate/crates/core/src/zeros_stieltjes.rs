//! Stieltjes constants, sums over nontrivial zeros and the relations between
//! them.
//!
//! ```text
//! γ_n  = lim_m [ Σ_{k≤m} (log k)^n / k − (log m)^{n+1}/(n+1) ]
//! Z(n) = Σ_j [ (1/2 + iλ_j)^{−n} + (1/2 − iλ_j)^{−n} ]
//! Z(1) = (2 + γ − log 4π)/2
//! Z(2) = 1 + γ² − π²/8 + 2γ_1
//! Z(3) = 1 + γ³ + 3γγ_1 + (3/2)γ_2 − (7/8)ζ(3)
//! ```

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{c64, real, KahanSum};
use crate::zeta_core::{scan_zeros, zeta_hat, DEFAULT_SCAN_STEP};

pub const STIELTJES_MAX_ORDER: usize = 8;

/// Euler–Maclaurin correction orders applied by [`stieltjes`].
pub const CORRECTION_ORDER: u32 = 2;

/// The table file shipped with the crate: the first 100 ordinates, produced
/// by [`ZeroTable::scan_first`].
pub const BUNDLED_ZEROS: &str = include_str!("../data/zeros100.txt");

/// `γ_n` from the defining limit at cutoff `m`, corrected by
/// `−f(m)/2 − f'(m)/12` with `f(x) = (log x)^n / x`.
pub fn stieltjes(n: usize, m: u64) -> Result<f64> {
    if n > STIELTJES_MAX_ORDER {
        return Err(Error::Precondition(format!(
            "Stieltjes order {n} above {STIELTJES_MAX_ORDER}"
        )));
    }
    if m == 0 {
        return Err(Error::InvalidInput("cutoff m must be positive".into()));
    }
    let mut acc = KahanSum::new();
    for k in 2..=m {
        let kf = k as f64;
        acc.add(real(kf.ln().powi(n as i32) / kf));
    }
    if n == 0 {
        acc.add(real(1.0));
    }
    let mf = m as f64;
    let l = mf.ln();
    let f = l.powi(n as i32) / mf;
    let fp = if n == 0 {
        -1.0 / (mf * mf)
    } else {
        (n as f64 * l.powi(n as i32 - 1) - l.powi(n as i32)) / (mf * mf)
    };
    let bracket = acc.value().re - l.powi(n as i32 + 1) / (n as f64 + 1.0);
    Ok(bracket - f / 2.0 - fp / 12.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StieltjesSet {
    /// `γ_0, …, γ_K`
    pub gammas: Vec<f64>,
    pub method: String,
    /// Summation cutoff; 0 when the constants were not summed.
    pub m: u64,
    pub correction_order: u32,
}

impl StieltjesSet {
    /// `γ_0..=γ_k_max` by [`stieltjes`] at cutoff `m`.
    pub fn compute(k_max: usize, m: u64) -> Result<Self> {
        let gammas = (0..=k_max).map(|n| stieltjes(n, m)).collect::<Result<Vec<_>>>()?;
        Ok(Self {
            gammas,
            method: "euler-maclaurin".into(),
            m,
            correction_order: CORRECTION_ORDER,
        })
    }

    pub fn from_values(gammas: Vec<f64>, method: impl Into<String>) -> Self {
        Self {
            gammas,
            method: method.into(),
            m: 0,
            correction_order: 0,
        }
    }

    fn get(&self, k: usize) -> Result<f64> {
        self.gammas.get(k).copied().ok_or_else(|| {
            Error::InvalidInput(format!("need gamma_{k}, set holds {} values", self.gammas.len()))
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("set serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }

    /// `1/(z−1) + Σ_n (−1)^n/n! γ_n (z−1)^n`.
    pub fn laurent(&self, z: f64) -> f64 {
        let h = z - 1.0;
        let mut acc = 1.0 / h;
        let mut c = 1.0;
        for (n, g) in self.gammas.iter().enumerate() {
            if n > 0 {
                c *= -h / n as f64;
            }
            acc += c * g;
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum ZeroSource {
    File { path: String },
    Bundled,
    Scan { t_min: f64, t_max: f64, step: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroTable {
    ordinates: Vec<f64>,
    /// Index of the first entry in the sequence of zeros.
    first_index: u64,
    source: ZeroSource,
}

/// Ordinate of the first zero, for the start-of-table check.
const FIRST_ORDINATE: f64 = 14.134_725;

impl ZeroTable {
    pub fn new(ordinates: Vec<f64>, first_index: u64, source: ZeroSource) -> Result<Self> {
        if ordinates.iter().any(|t| !(t.is_finite() && *t > 0.0)) {
            return Err(Error::InvalidInput("ordinates must be positive and finite".into()));
        }
        if ordinates.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput("ordinates must be strictly increasing".into()));
        }
        if first_index == 1 {
            if let Some(t0) = ordinates.first() {
                if (t0 - FIRST_ORDINATE).abs() > 1e-3 {
                    return Err(Error::InvalidInput(format!(
                        "table claims to start at the first zero but begins at {t0}"
                    )));
                }
            }
        }
        Ok(Self {
            ordinates,
            first_index,
            source,
        })
    }

    /// Parses one ordinate per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str, source: ZeroSource) -> Result<Self> {
        let mut ordinates = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let t: f64 = body
                .parse()
                .map_err(|_| Error::Format(format!("line {}: cannot parse {body:?}", i + 1)))?;
            ordinates.push(t);
        }
        Self::new(ordinates, 1, source)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        Self::parse(
            &text,
            ZeroSource::File {
                path: path.display().to_string(),
            },
        )
    }

    pub fn bundled() -> Self {
        Self::parse(BUNDLED_ZEROS, ZeroSource::Bundled).expect("bundled zero table is valid")
    }

    /// The first `count` zeros found by scanning Hardy's function from
    /// `t = 10` at the default step.
    pub fn scan_first(count: usize) -> Result<Self> {
        let mut t_max = count_estimate_inverse(count as f64 + 2.0).max(20.0).ceil();
        loop {
            let scan = scan_zeros(10.0, t_max, DEFAULT_SCAN_STEP)?;
            if scan.ordinates.len() >= count {
                let mut ordinates = scan.ordinates;
                ordinates.truncate(count);
                return Self::new(
                    ordinates,
                    1,
                    ZeroSource::Scan {
                        t_min: 10.0,
                        t_max,
                        step: DEFAULT_SCAN_STEP,
                    },
                );
            }
            t_max = (t_max * 1.25).ceil();
        }
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    pub fn len(&self) -> usize {
        self.ordinates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordinates.is_empty()
    }

    pub fn source(&self) -> &ZeroSource {
        &self.source
    }

    /// The first `k` entries.
    pub fn truncated(&self, k: usize) -> Self {
        Self {
            ordinates: self.ordinates[..k.min(self.len())].to_vec(),
            first_index: self.first_index,
            source: self.source.clone(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# ordinates of nontrivial zeta zeros, one per line");
        let _ = writeln!(out, "# count {}, first index {}", self.len(), self.first_index);
        if let ZeroSource::Scan { t_min, t_max, step } = self.source {
            let _ = writeln!(out, "# sign changes of Z(t) on [{t_min}, {t_max}], step {step}, bisection to 1e-10");
        }
        for t in &self.ordinates {
            let _ = writeln!(out, "{t:.13}");
        }
        out
    }
}

/// Smooth zero count `N(T) ≈ (T/2π) log(T/2π) − T/2π + 7/8`.
pub fn smooth_count(t: f64) -> f64 {
    let x = t / (2.0 * PI);
    x * x.ln() - x + 0.875
}

fn count_estimate_inverse(n: f64) -> f64 {
    let (mut lo, mut hi) = (2.0 * PI * 1.01, 1e9);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if smooth_count(mid) < n {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroSum {
    pub n: u32,
    /// Number of table entries summed.
    pub count: u64,
    /// Σ over the table only.
    pub raw: f64,
    /// Density-integrated contribution of zeros above the last ordinate.
    pub tail: f64,
    pub value: f64,
}

/// `2 Re[(1/2 + it)^{−n}]`, the contribution of a conjugate pair.
pub fn pair_term(n: u32, t: f64) -> f64 {
    2.0 * c64(0.5, t).powi(-(n as i32)).re
}

/// `∫_T^∞ (1/2π) log(t/2π) · 2Re[(1/2+it)^{−n}] dt` from the expansion
/// `(1/2+it)^{−n} = Σ_k C(−n,k) 2^{−k} (it)^{−n−k}` and
/// `∫_T^∞ log(t/2π) t^{−j} dt = T^{1−j}[log(T/2π)/(j−1) + 1/(j−1)²]`.
pub fn zero_tail(n: u32, t: f64) -> f64 {
    let lt = (t / (2.0 * PI)).ln();
    let mut acc = 0.0;
    let mut c = 1.0; // C(−n, k)
    for k in 0..40u32 {
        if k > 0 {
            c *= -(n as f64 + k as f64 - 1.0) / k as f64;
        }
        let j = n + k;
        if j % 2 == 1 {
            continue;
        }
        let sign = if (j / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
        let jm = j as f64 - 1.0;
        let integral = t.powf(-jm) * (lt / jm + 1.0 / (jm * jm));
        let term = 2.0 * c * 0.5f64.powi(k as i32) * sign * integral;
        acc += term;
        if term.abs() < 1e-20 {
            break;
        }
    }
    acc / (2.0 * PI)
}

/// `Z(n)` over a table, with the tail above the last ordinate reported
/// separately.
pub fn z_sum_from_zeros(n: u32, table: &ZeroTable) -> Result<ZeroSum> {
    if n == 0 {
        return Err(Error::InvalidInput("zero sums need n >= 1".into()));
    }
    let Some(&last) = table.ordinates().last() else {
        return Err(Error::InvalidInput("zero table is empty".into()));
    };
    let raw = table
        .ordinates()
        .iter()
        .map(|&t| real(pair_term(n, t)))
        .collect::<KahanSum>()
        .value()
        .re;
    let tail = zero_tail(n, last);
    Ok(ZeroSum {
        n,
        count: table.len() as u64,
        raw,
        tail,
        value: raw + tail,
    })
}

/// The closed forms for `Z(1)`, `Z(2)`, `Z(3)`.
pub fn z_closed_form(n: u32, gammas: &StieltjesSet) -> Result<f64> {
    let g = gammas.get(0)?;
    match n {
        1 => Ok((2.0 + g - (4.0 * PI).ln()) / 2.0),
        2 => Ok(1.0 + g * g - PI * PI / 8.0 + 2.0 * gammas.get(1)?),
        3 => {
            let g1 = gammas.get(1)?;
            let g2 = gammas.get(2)?;
            let z3 = zeta_hat(real(3.0))?.re;
            Ok(1.0 + g.powi(3) + 3.0 * g * g1 + 1.5 * g2 - 0.875 * z3)
        }
        _ => Err(Error::Precondition(format!("no closed form for Z({n})"))),
    }
}

/// Inverts the closed forms for `γ_0, γ_1, γ_2` from `Z(1), Z(2), Z(3)`.
pub fn gammas_from_z(z_values: &[f64]) -> Result<StieltjesSet> {
    if z_values.is_empty() {
        return Err(Error::InvalidInput("need at least Z(1)".into()));
    }
    if z_values.len() > 3 {
        return Err(Error::Precondition(format!(
            "closed forms stop at Z(3), got {} values",
            z_values.len()
        )));
    }
    let g0 = 2.0 * z_values[0] - 2.0 + (4.0 * PI).ln();
    let mut gammas = vec![g0];
    if let Some(&z2) = z_values.get(1) {
        gammas.push(gamma1_consistent(z2, g0));
    }
    if let Some(&z3) = z_values.get(2) {
        let g1 = gammas[1];
        let zeta3 = zeta_hat(real(3.0))?.re;
        gammas.push((z3 - 1.0 - g0.powi(3) - 3.0 * g0 * g1 + 0.875 * zeta3) * 2.0 / 3.0);
    }
    Ok(StieltjesSet::from_values(gammas, "zero-sum inversion"))
}

/// `γ_1 = (Z(2) − 1 − γ² + π²/8)/2`, the inverse of the `Z(2)` closed form.
fn gamma1_consistent(z2: f64, g0: f64) -> f64 {
    (z2 - 1.0 - g0 * g0 + PI * PI / 8.0) / 2.0
}

/// The two candidate inversions for `γ_1` that differ in the sign of `π²/8`,
/// measured against a reference value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gamma1SignCheck {
    pub z2: f64,
    pub gamma0: f64,
    /// `(Z(2) − 1 − γ² + π²/8)/2`
    pub plus_pi2_8: f64,
    /// `(Z(2) − 1 − γ² − π²/8)/2`
    pub minus_pi2_8: f64,
    pub reference: f64,
    /// `true` when the `+π²/8` form is the closer one.
    pub plus_is_consistent: bool,
}

pub fn gamma1_sign_check(z2: f64, gamma0: f64, reference: f64) -> Gamma1SignCheck {
    let plus = gamma1_consistent(z2, gamma0);
    let minus = (z2 - 1.0 - gamma0 * gamma0 - PI * PI / 8.0) / 2.0;
    Gamma1SignCheck {
        z2,
        gamma0,
        plus_pi2_8: plus,
        minus_pi2_8: minus,
        reference,
        plus_is_consistent: (plus - reference).abs() < (minus - reference).abs(),
    }
}
