//! Elliptic curves over the rationals, point counts modulo primes, and
//! truncations of
//!
//! ```text
//! L(E, z) = Π_p 1 / (1 − (p − N_p) p^{−z} + p^{1−2z})
//! ```
//!
//! where `N_p` is the number of affine solutions of the reduced equation, so
//! `p − N_p` is the usual trace `a_p = p + 1 − #E(F_p)`.
//!
//! The curve `E: Y² + aY = X³ + bX² + cX + d` is the long Weierstrass form
//! with `a1 = 0, a3 = a, a2 = b, a4 = c, a6 = d`.
//!
//! Not covered: the leading-term side of the conjecture (Sha, regulator,
//! Tamagawa numbers, real period, torsion order). Only partial products and
//! their window ratios are computed.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{pow_neg, real, ComplexValue};
use crate::primes::{is_prime_u64, PrimeTable};
use crate::report::{least_squares_slope, ConvergenceTable};
use crate::zeta_core::VANISHING_FACTOR_EPS;

/// Primes up to this bound are counted by enumeration.
pub const ENUMERATION_LIMIT: u64 = 1_000;

/// Largest prime accepted by [`count_points`].
pub const COUNT_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EllipticCurve {
    pub a1: i64,
    pub a2: i64,
    pub a3: i64,
    pub a4: i64,
    pub a6: i64,
    discriminant: i128,
}

fn overflow() -> Error {
    Error::InvalidInput("curve coefficients too large for the discriminant".into())
}

fn discriminant(a: [i64; 5]) -> Result<i128> {
    let [a1, a2, a3, a4, a6] = a.map(i128::from);
    let m = |x: i128, y: i128| x.checked_mul(y).ok_or_else(overflow);
    let s = |xs: &[i128]| xs.iter().try_fold(0i128, |acc, x| acc.checked_add(*x)).ok_or_else(overflow);
    let b2 = s(&[m(a1, a1)?, m(4, a2)?])?;
    let b4 = s(&[m(2, a4)?, m(a1, a3)?])?;
    let b6 = s(&[m(a3, a3)?, m(4, a6)?])?;
    let b8 = s(&[
        m(m(a1, a1)?, a6)?,
        m(m(4, a2)?, a6)?,
        -m(m(a1, a3)?, a4)?,
        m(a2, m(a3, a3)?)?,
        -m(a4, a4)?,
    ])?;
    s(&[
        -m(m(b2, b2)?, b8)?,
        -m(8, m(m(b4, b4)?, b4)?)?,
        -m(27, m(b6, b6)?)?,
        m(m(9, b2)?, m(b4, b6)?)?,
    ])
}

impl EllipticCurve {
    /// `y² + a1 xy + a3 y = x³ + a2 x² + a4 x + a6`; singular curves are
    /// rejected.
    pub fn new(a1: i64, a2: i64, a3: i64, a4: i64, a6: i64) -> Result<Self> {
        let d = discriminant([a1, a2, a3, a4, a6])?;
        if d == 0 {
            return Err(Error::InvalidInput(format!(
                "singular curve [{a1},{a2},{a3},{a4},{a6}]"
            )));
        }
        Ok(Self {
            a1,
            a2,
            a3,
            a4,
            a6,
            discriminant: d,
        })
    }

    /// `Y² + aY = X³ + bX² + cX + d`.
    pub fn from_cubic_form(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(0, b, a, c, d)
    }

    pub fn discriminant(&self) -> i128 {
        self.discriminant
    }

    pub fn coefficients(&self) -> [i64; 5] {
        [self.a1, self.a2, self.a3, self.a4, self.a6]
    }

    pub fn is_good_prime(&self, p: u64) -> bool {
        self.discriminant % p as i128 != 0
    }
}

impl fmt::Display for EllipticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{},{}", self.a1, self.a2, self.a3, self.a4, self.a6)
    }
}

impl FromStr for EllipticCurve {
    type Err = Error;

    /// `a1,a2,a3,a4,a6` or `cubic:a,b,c,d`.
    fn from_str(s: &str) -> Result<Self> {
        let (cubic, body) = match s.trim().strip_prefix("cubic:") {
            Some(rest) => (true, rest),
            None => (false, s.trim()),
        };
        let nums = body
            .split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::InvalidInput(format!("cannot parse curve spec {s:?}")))?;
        match (cubic, nums.as_slice()) {
            (true, [a, b, c, d]) => Self::from_cubic_form(*a, *b, *c, *d),
            (false, [a1, a2, a3, a4, a6]) => Self::new(*a1, *a2, *a3, *a4, *a6),
            _ => Err(Error::InvalidInput(format!("wrong number of coefficients in {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledCurve {
    pub label: String,
    pub curve: EllipticCurve,
}

/// One curve per line, `label spec` or just `spec`; `#` starts a comment.
pub fn parse_curve_list(text: &str) -> Result<Vec<LabeledCurve>> {
    let mut out = Vec::new();
    for line in text.lines() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let parts: Vec<&str> = body.split_whitespace().collect();
        let (label, spec) = match parts.as_slice() {
            [spec] => (spec.to_string(), *spec),
            [label, spec] => (label.to_string(), *spec),
            _ => return Err(Error::Format(format!("bad curve line {line:?}"))),
        };
        out.push(LabeledCurve {
            label,
            curve: spec.parse()?,
        });
    }
    Ok(out)
}

pub fn load_curve_list(path: impl AsRef<Path>) -> Result<Vec<LabeledCurve>> {
    parse_curve_list(&std::fs::read_to_string(path)?)
}

/// The five test curves shipped with the crate.
pub const BUNDLED_CURVES: &str = include_str!("../data/curves.txt");

pub fn bundled_curves() -> Vec<LabeledCurve> {
    parse_curve_list(BUNDLED_CURVES).expect("bundled curve list is valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalData {
    pub p: u64,
    /// Affine solutions over `F_p`.
    pub n_p: u64,
    /// `p − N_p`
    pub a_p: i64,
    pub good_reduction: bool,
}

impl LocalData {
    /// `|a_p| ≤ 2√p`, required at good primes.
    pub fn hasse_ok(&self) -> bool {
        (self.a_p as f64).powi(2) <= 4.0 * self.p as f64
    }
}

fn residue(a: i64, p: u64) -> u64 {
    a.rem_euclid(p as i64) as u64
}

fn check_prime(p: u64) -> Result<()> {
    if p > COUNT_LIMIT {
        return Err(Error::Capacity {
            requested: p,
            cap: COUNT_LIMIT,
        });
    }
    if !is_prime_u64(p) {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    Ok(())
}

/// `N_p` by checking all `p²` pairs.
pub fn count_by_enumeration(e: &EllipticCurve, p: u64) -> Result<u64> {
    check_prime(p)?;
    let [a1, a2, a3, a4, a6] = e.coefficients().map(|a| residue(a, p));
    let mut count = 0;
    for x in 0..p {
        let rhs = (((x * x % p) * x % p) + a2 * (x * x % p) % p + a4 * x % p + a6) % p;
        let lin = (a1 * x + a3) % p;
        for y in 0..p {
            if (y * y % p + lin * y % p) % p == rhs {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// `N_p = p + Σ_x (D(x)/p)` with `D(x) = 4x³ + b2 x² + 2b4 x + b6`, the
/// discriminant in `y` of the curve equation. Needs `p ≥ 5`.
pub fn count_by_character(e: &EllipticCurve, p: u64) -> Result<u64> {
    check_prime(p)?;
    if p < 5 {
        return Err(Error::Precondition(format!(
            "character-sum count needs p >= 5, got {p}"
        )));
    }
    let [a1, a2, a3, a4, a6] = e.coefficients().map(i128::from);
    let pi = p as i128;
    let c3 = 4i128;
    let c2 = (a1 * a1 + 4 * a2).rem_euclid(pi);
    let c1 = (2 * (2 * a4 + a1 * a3)).rem_euclid(pi);
    let c0 = (a3 * a3 + 4 * a6).rem_euclid(pi);
    let d = |x: i128| ((c3 * x % pi * x % pi * x) + c2 * x % pi * x + c1 * x + c0).rem_euclid(pi) as u64;

    let mut square = vec![false; p as usize];
    for y in 1..=(p - 1) / 2 {
        square[(y * y % p) as usize] = true;
    }
    // forward differences of the cubic
    let (d0, d1, d2, d3) = (d(0), d(1), d(2), d(3));
    let add = |a: u64, b: u64| {
        let s = a + b;
        if s >= p {
            s - p
        } else {
            s
        }
    };
    let sub = |a: u64, b: u64| add(a, p - b);
    let mut v = d0;
    let mut del1 = sub(d1, d0);
    let mut del2 = sub(sub(d2, d1), sub(d1, d0));
    let del3 = sub(sub(sub(d3, d2), sub(d2, d1)), sub(sub(d2, d1), sub(d1, d0)));
    let mut sum: i64 = 0;
    for _ in 0..p {
        if v != 0 {
            sum += if square[v as usize] { 1 } else { -1 };
        }
        v = add(v, del1);
        del1 = add(del1, del2);
        del2 = add(del2, del3);
    }
    Ok((p as i64 + sum) as u64)
}

/// Local data at `p`: enumeration up to [`ENUMERATION_LIMIT`], character sum
/// above it.
pub fn count_points(e: &EllipticCurve, p: u64) -> Result<LocalData> {
    let n_p = if p <= ENUMERATION_LIMIT {
        count_by_enumeration(e, p)?
    } else {
        count_by_character(e, p)?
    };
    Ok(LocalData {
        p,
        n_p,
        a_p: p as i64 - n_p as i64,
        good_reduction: e.is_good_prime(p),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BadPrimeMode {
    /// `1/(1 − a_p p^{−z} + p^{1−2z})` at every prime.
    #[default]
    Verbatim,
    /// `1/(1 − a_p p^{−z})` at primes of bad reduction.
    Standard,
}

/// The local factor at one prime.
pub fn local_factor(ld: &LocalData, z: ComplexValue, mode: BadPrimeMode) -> Result<ComplexValue> {
    let pf = ld.p as f64;
    let lin = ld.a_p as f64 * pow_neg(pf, z);
    let d = if mode == BadPrimeMode::Standard && !ld.good_reduction {
        1.0 - lin
    } else {
        1.0 - lin + pow_neg(pf, 2.0 * z - 1.0)
    };
    if d.norm() < VANISHING_FACTOR_EPS {
        return Err(Error::VanishingFactor { p: ld.p });
    }
    Ok(1.0 / d)
}

/// A curve with cached local data for an initial run of primes.
#[derive(Debug, Clone, PartialEq)]
pub struct EllipticL {
    curve: EllipticCurve,
    local: Vec<LocalData>,
    mode: BadPrimeMode,
}

impl EllipticL {
    /// Counts points at the first `n_primes` primes of `table`, in parallel;
    /// results are stored in prime order.
    pub fn new(curve: EllipticCurve, table: &PrimeTable, n_primes: usize) -> Result<Self> {
        let local = table
            .first(n_primes)?
            .par_iter()
            .map(|&p| count_points(&curve, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            curve,
            local,
            mode: BadPrimeMode::Verbatim,
        })
    }

    pub fn with_mode(mut self, mode: BadPrimeMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn curve(&self) -> &EllipticCurve {
        &self.curve
    }

    pub fn local_data(&self) -> &[LocalData] {
        &self.local
    }

    fn require(&self, needed: usize) -> Result<()> {
        if needed > self.local.len() {
            Err(Error::InsufficientTable {
                needed,
                available: self.local.len(),
            })
        } else {
            Ok(())
        }
    }

    fn product(&self, range: std::ops::Range<usize>, z: ComplexValue) -> Result<ComplexValue> {
        let mut acc = real(1.0);
        for ld in &self.local[range] {
            acc *= local_factor(ld, z, self.mode)?;
        }
        Ok(acc)
    }

    /// Product over the first `n` primes, ascending.
    pub fn partial(&self, z: ComplexValue, n: usize) -> Result<ComplexValue> {
        self.require(n)?;
        self.product(0..n, z)
    }

    /// Product over prime indices `n+1..=2n`.
    pub fn window(&self, z: ComplexValue, n: usize) -> Result<ComplexValue> {
        self.require(2 * n)?;
        self.product(n..2 * n, z)
    }

    /// Product over prime indices `from+1..=to`.
    pub fn splice(&self, z: ComplexValue, from: usize, to: usize) -> Result<ComplexValue> {
        self.require(to)?;
        if from > to {
            return Err(Error::InvalidInput(format!("empty splice {from}..{to}")));
        }
        self.product(from..to, z)
    }

    /// Window ratios over a ladder, with 1 as the reference column.
    pub fn window_table(&self, z: ComplexValue, ladder: &[usize]) -> Result<ConvergenceTable> {
        let mut t = ConvergenceTable::new(z, "l-window-ratio");
        for &n in ladder {
            t.push(n as u64, self.window(z, n)?, real(1.0))?;
        }
        Ok(t)
    }

    pub fn probe(&self, ladder: &[usize]) -> Result<VanishingProbe> {
        let z = real(1.0);
        let rows = ladder
            .iter()
            .map(|&n| {
                let value = self.partial(z, n)?;
                let nf = n as f64;
                Ok(ProbeRow {
                    n: n as u64,
                    value,
                    log_abs: value.norm().ln(),
                    log_n: nf.ln(),
                    log_log_n: nf.ln().ln(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let fit = |x: fn(&ProbeRow) -> f64| {
            let pts: Vec<(f64, f64)> = rows.iter().map(|r| (x(r), r.log_abs)).collect();
            least_squares_slope(&pts)
        };
        Ok(VanishingProbe {
            curve: self.curve.to_string(),
            mode: self.mode,
            slope_log_n: fit(|r| r.log_n),
            slope_log_log_n: fit(|r| r.log_log_n),
            rows,
            commentary: PROBE_COMMENTARY.to_string(),
        })
    }
}

const PROBE_COMMENTARY: &str = "Heuristic only: if L(E,z) vanishes to order r at z = 1, partial \
products at z = 1 are expected to shrink roughly like (log n)^(-r), up to a constant that \
includes a factor sqrt(2). The slope against log log n is the quantity to compare with -r. \
No rank is inferred.";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProbeRow {
    pub n: u64,
    pub value: ComplexValue,
    pub log_abs: f64,
    pub log_n: f64,
    pub log_log_n: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VanishingProbe {
    pub curve: String,
    pub mode: BadPrimeMode,
    pub rows: Vec<ProbeRow>,
    pub slope_log_n: Option<f64>,
    pub slope_log_log_n: Option<f64>,
    pub commentary: String,
}

impl VanishingProbe {
    /// The rows as a convergence table against 0.
    pub fn to_table(&self) -> Result<ConvergenceTable> {
        let mut t = ConvergenceTable::new(real(1.0), "l-partial");
        for r in &self.rows {
            t.push(r.n, r.value, real(0.0))?;
        }
        Ok(t)
    }
}

/// `Π_{k≤n} 1/(1 − a_{p_k} p_k^{−z} + p_k^{1−2z})`.
pub fn l_partial(e: &EllipticCurve, z: ComplexValue, n: usize, table: &PrimeTable) -> Result<ComplexValue> {
    EllipticL::new(*e, table, n)?.partial(z, n)
}

/// Product of local factors over prime indices `n+1..=2n`.
pub fn l_window_ratio(e: &EllipticCurve, z: ComplexValue, n: usize, table: &PrimeTable) -> Result<ComplexValue> {
    EllipticL::new(*e, table, 2 * n)?.window(z, n)
}

/// Partial products at `z = 1` over an ascending ladder.
pub fn vanishing_probe(e: &EllipticCurve, ladder: &[usize], table: &PrimeTable) -> Result<VanishingProbe> {
    if ladder.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput("ladder must be ascending".into()));
    }
    let top = ladder.last().copied().unwrap_or(0);
    EllipticL::new(*e, table, top)?.probe(ladder)
}
