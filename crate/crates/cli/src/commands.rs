use std::ffi::OsStr;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;
use zreg::bernoulli::{
    b_dc, b_partial, b_partial_poly, b_value, bernoulli_numbers, g_factor, gen_bernoulli, gen_bernoulli_exact,
    rational_to_f64, trivial_zeros, zeta_from_b,
};
use zreg::char_identity::{triple_set_size, verify_identity, IdentityReport};
use zreg::elliptic::{bundled_curves, BadPrimeMode, EllipticL};
use zreg::numerics::pow_real_base;
use zreg::prime_zeta::{p_hat, p_hat_table, p_inclusion_exclusion, p_partial, r_remainder, special_values_report};
use zreg::zeros_stieltjes::{gamma1_sign_check, gammas_from_z, z_closed_form, z_sum_from_zeros, ZeroSource, ZeroSum};
use zreg::zeta_core::{
    cutoff_table, fn_ratio_table, ratio_reconstruction_table, scan_zeros, sigma_gap, sigma_gap_table,
    window_log_sum_table, zeta_hat, TruncationMethod, TruncationRecord, DEFAULT_SCAN_STEP,
};
use zreg::{
    format_complex, parse_complex, ComplexValue, ConvergenceTable, EllipticCurve, PrimeTable, StieltjesSet, ZeroTable,
};

use crate::args::*;
use crate::output::{f, re_im, table_text, Csv, Report};

pub const CACHE_ENV: &str = "ZREG_CACHE_DIR";

const DEFAULT_CUTOFF: usize = 1000;
const DEFAULT_PRIMES: usize = 10_000;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] zreg::Error),
    #[error("check failed:\n{0}")]
    Mismatch(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(e.into())
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Core(zreg::Error::Io(_)) => 3,
            CliError::Core(_) | CliError::Mismatch(_) => 2,
        }
    }
}

type Out = Result<Report, CliError>;

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

pub struct Context {
    pub prime_cache: Option<PathBuf>,
}

impl Context {
    /// Explicit path, else `primes.bin` in the cache directory, else none.
    pub fn resolve(flag: Option<PathBuf>, cache_dir: Option<&OsStr>) -> Self {
        let prime_cache = flag.or_else(|| cache_dir.map(|d| Path::new(d).join("primes.bin")));
        Self { prime_cache }
    }

    fn primes(&self, n: usize) -> zreg::Result<PrimeTable> {
        let n = n.max(1) as u64;
        match &self.prime_cache {
            Some(path) => PrimeTable::load_or_build(path, n),
            None => PrimeTable::sieve_to_count(n),
        }
    }
}

/// Fills in every default that depends on other flags or the environment,
/// so the embedded config states exactly what was computed.
pub fn resolve(cmd: Command, cache_dir: Option<&OsStr>) -> Command {
    match cmd {
        Command::PrimeZeta(mut a) => {
            if a.depth.is_none() {
                a.depth = match a.method {
                    PrimeZetaKind::InclusionExclusion => Some(3),
                    PrimeZetaKind::Remainder => Some(30),
                    _ => None,
                };
            }
            if a.n.is_none() && a.ladder.is_empty() && a.method != PrimeZetaKind::InclusionExclusion {
                a.n = Some(DEFAULT_PRIMES);
            }
            Command::PrimeZeta(a)
        }
        Command::Zeta(mut a) => {
            if a.n.is_none() && a.ladder.is_empty() && a.method != ZetaMethod::Eta {
                a.n = Some(DEFAULT_CUTOFF);
            }
            Command::Zeta(a)
        }
        Command::Bernoulli(mut a) => {
            a.n.get_or_insert(match a.kind {
                BernoulliKind::Numbers => 20,
                BernoulliKind::Poly | BernoulliKind::GFactor => 6,
                BernoulliKind::Partial => 40,
                BernoulliKind::Limit => 0,
                BernoulliKind::Dc => 64,
                BernoulliKind::ZetaFromB => DEFAULT_PRIMES,
            });
            Command::Bernoulli(a)
        }
        Command::Lfun(mut a) => {
            if a.n.is_none() && a.ladder.is_empty() {
                a.n = Some(DEFAULT_CUTOFF);
            }
            Command::Lfun(a)
        }
        Command::Zsum(mut a) => {
            if a.zero_table.is_none() {
                a.zero_table = cache_dir
                    .map(|d| Path::new(d).join("zeros.txt"))
                    .filter(|p| p.is_file());
            }
            Command::Zsum(a)
        }
        Command::Zeros(mut a) => {
            if a.count.is_none() {
                a.t_min.get_or_insert(10.0);
                a.t_max.get_or_insert(50.0);
                a.step.get_or_insert(DEFAULT_SCAN_STEP);
            }
            Command::Zeros(a)
        }
        other => other,
    }
}

pub fn execute(cmd: &Command, ctx: &Context) -> Out {
    match cmd {
        Command::Zeta(a) => zeta(a, ctx),
        Command::FnRatio(a) => {
            let z = parse_complex(&a.z)?;
            check_ladder(&a.ladder)?;
            let table = ctx.primes(2 * max(&a.ladder))?;
            Ok(Report::table(&fn_ratio_table(z, &a.ladder, &table)?))
        }
        Command::WindowSum(a) => {
            let z = parse_complex(&a.z)?;
            check_ladder(&a.ladder)?;
            let table = ctx.primes(2 * max(&a.ladder))?;
            Ok(Report::table(&window_log_sum_table(z, &a.ladder, a.depth, &table)?))
        }
        Command::PrimeZeta(a) => prime_zeta(a, ctx),
        Command::Bernoulli(a) => bernoulli(a, ctx),
        Command::GenBernoulli(a) => gen_bernoulli_cmd(a),
        Command::Stieltjes(a) => stieltjes_cmd(a),
        Command::Zsum(a) => zsum(a),
        Command::Zeros(a) => zeros(a),
        Command::Lfun(a) => lfun(a, ctx),
        Command::ProbeRank(a) => probe(a, ctx),
        Command::Identity45(a) => identity(a),
        Command::ReportSpecial => special(),
    }
}

fn max(ladder: &[usize]) -> usize {
    ladder.iter().copied().max().unwrap_or(0)
}

fn check_ladder(ladder: &[usize]) -> Result<(), CliError> {
    if ladder.is_empty() {
        return usage("--ladder needs at least one cutoff");
    }
    if ladder[0] == 0 || ladder.windows(2).any(|w| w[1] <= w[0]) {
        return usage("--ladder must be positive and strictly increasing");
    }
    Ok(())
}

#[derive(Serialize)]
struct PointValue {
    z: ComplexValue,
    method: String,
    n: Option<u64>,
    value: ComplexValue,
}

fn point_report(v: PointValue) -> Report {
    let mut csv = Csv::new(&["z_re", "z_im", "method", "n", "re", "im"]);
    let n = v.n.map(|n| n.to_string()).unwrap_or_default();
    let [zr, zi] = re_im(v.z);
    let [r, i] = re_im(v.value);
    csv.row([zr, zi, v.method.clone(), n, r, i]);
    let text = format!("{}\n", format_complex(v.value));
    Report::new(v, csv.finish(), text)
}

fn truncation(m: ZetaMethod) -> Option<TruncationMethod> {
    match m {
        ZetaMethod::PartialSum => Some(TruncationMethod::PartialSum),
        ZetaMethod::EulerProduct => Some(TruncationMethod::EulerProduct),
        ZetaMethod::Alternating => Some(TruncationMethod::Alternating),
        ZetaMethod::Cutoff => Some(TruncationMethod::CutoffRegularized),
        ZetaMethod::Ratio => Some(TruncationMethod::RatioReconstructed),
        ZetaMethod::Eta | ZetaMethod::SigmaGap => None,
    }
}

fn method_name(m: impl Serialize) -> String {
    serde_json::to_value(m)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

/// Primes a zeta method needs for cutoff `n`.
fn zeta_primes(m: ZetaMethod, n: usize) -> usize {
    match m {
        ZetaMethod::Ratio => 2 * n,
        ZetaMethod::EulerProduct | ZetaMethod::SigmaGap => n,
        _ => 0,
    }
}

fn zeta(a: &ZetaArgs, ctx: &Context) -> Out {
    let z = parse_complex(&a.z)?;
    if a.method == ZetaMethod::Eta {
        if a.n.is_some() || !a.ladder.is_empty() {
            return usage("--method eta takes no cutoff");
        }
        return Ok(point_report(PointValue {
            z,
            method: "eta".into(),
            n: None,
            value: zeta_hat(z)?,
        }));
    }
    if a.ladder.is_empty() {
        let n = a.n.unwrap_or(DEFAULT_CUTOFF);
        let table = ctx.primes(zeta_primes(a.method, n))?;
        let value = match truncation(a.method) {
            Some(m) => TruncationRecord::evaluate(m, z, n, &table)?.value,
            None => sigma_gap(z, n, &table)?,
        };
        return Ok(point_report(PointValue {
            z,
            method: method_name(a.method),
            n: Some(n as u64),
            value,
        }));
    }
    check_ladder(&a.ladder)?;
    let table = ctx.primes(zeta_primes(a.method, max(&a.ladder)))?;
    let t = match a.method {
        ZetaMethod::Cutoff => cutoff_table(z, &a.ladder)?,
        ZetaMethod::Ratio => ratio_reconstruction_table(z, &a.ladder, &table)?,
        ZetaMethod::SigmaGap => sigma_gap_table(z, &a.ladder, &table)?,
        m => {
            let tm = truncation(m).expect("truncation method");
            let limit = zeta_hat(z)?;
            // the alternating sums tend to eta = (1 - 2^(1-z)) zeta
            let reference = if m == ZetaMethod::Alternating {
                (1.0 - pow_real_base(2.0, 1.0 - z)) * limit
            } else {
                limit
            };
            let mut t = ConvergenceTable::new(z, method_name(m));
            for &n in &a.ladder {
                t.push(n as u64, TruncationRecord::evaluate(tm, z, n, &table)?.value, reference)?;
            }
            t
        }
    };
    Ok(Report::table(&t))
}

fn prime_zeta(a: &PrimeZetaArgs, ctx: &Context) -> Out {
    let z = parse_complex(&a.z)?;
    match a.method {
        PrimeZetaKind::Partial | PrimeZetaKind::Regularized => {
            let regularized = a.method == PrimeZetaKind::Regularized;
            let eval = |n: usize, table: &PrimeTable| {
                if regularized {
                    p_hat(z, n, table)
                } else {
                    p_partial(z, n, table)
                }
            };
            if a.ladder.is_empty() {
                let n = a.n.unwrap_or(DEFAULT_PRIMES);
                let table = ctx.primes(n)?;
                return Ok(point_report(PointValue {
                    z,
                    method: method_name(a.method),
                    n: Some(n as u64),
                    value: eval(n, &table)?,
                }));
            }
            check_ladder(&a.ladder)?;
            let table = ctx.primes(max(&a.ladder))?;
            if regularized {
                return Ok(Report::table(&p_hat_table(z, &a.ladder, &table)?));
            }
            let values = a
                .ladder
                .iter()
                .map(|&n| p_partial(z, n, &table))
                .collect::<zreg::Result<Vec<_>>>()?;
            let reference = *values.last().expect("nonempty ladder");
            let mut t = ConvergenceTable::new(z, "partial");
            for (&n, v) in a.ladder.iter().zip(values) {
                t.push(n as u64, v, reference)?;
            }
            Ok(Report::table(&t))
        }
        PrimeZetaKind::InclusionExclusion => {
            if a.n.is_some() || !a.ladder.is_empty() {
                return usage("inclusion-exclusion takes --m and --depth, not --n or --ladder");
            }
            let depth = a.depth.unwrap_or(3);
            let ie = p_inclusion_exclusion(z, a.m, depth)?;
            let mut csv = Csv::new(&["d", "factors", "sign", "log_zeta_re", "log_zeta_im", "flagged"]);
            let mut text = String::new();
            let _ = writeln!(text, "{}", format_complex(ie.result.value));
            let _ = writeln!(
                text,
                "# {} terms kept, {} dropped (bound {:e})",
                ie.terms.len(),
                ie.dropped_terms,
                ie.dropped_bound
            );
            for t in &ie.terms {
                let factors: Vec<String> = t.factors.iter().map(u64::to_string).collect();
                let [r, i] = re_im(t.log_zeta);
                csv.row([
                    t.d.to_string(),
                    factors.join("*"),
                    t.sign.to_string(),
                    r,
                    i,
                    t.flagged.to_string(),
                ]);
                if t.flagged {
                    let _ = writeln!(text, "# warning: d = {} puts log zeta outside Re > 1", t.d);
                }
            }
            Ok(Report::new(&ie, csv.finish(), text))
        }
        PrimeZetaKind::Remainder => {
            if !a.ladder.is_empty() {
                return usage("remainder takes a single --n");
            }
            let n = a.n.unwrap_or(DEFAULT_PRIMES);
            let depth = a.depth.unwrap_or(30);
            let table = ctx.primes(n)?;
            let r = r_remainder(z, depth, n, &table)?;
            let mut csv = Csv::new(&["z_re", "z_im", "depth", "n_primes", "re", "im", "tail_bound", "truncation_bound"]);
            let [zr, zi] = re_im(z);
            let [vr, vi] = re_im(r.value);
            csv.row([zr, zi, depth.to_string(), n.to_string(), vr, vi, f(r.tail_bound), f(r.truncation_bound)]);
            let text = format!(
                "{}\n# next order below {:e}, prime truncation below {:e}\n",
                format_complex(r.value),
                r.tail_bound,
                r.truncation_bound
            );
            Ok(Report::new(r, csv.finish(), text))
        }
    }
}

fn need_z(a: &BernoulliArgs) -> Result<ComplexValue, CliError> {
    match &a.z {
        Some(z) => Ok(parse_complex(z)?),
        None => usage("this --kind needs --z"),
    }
}

#[derive(Serialize)]
struct PolyResult {
    n: usize,
    coefficients: Vec<String>,
    polynomial: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    trivial_zeros: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    leading: Option<String>,
}

fn bernoulli(a: &BernoulliArgs, ctx: &Context) -> Out {
    let n = a.n.unwrap_or(0);
    let takes_z = !matches!(a.kind, BernoulliKind::Numbers | BernoulliKind::Poly | BernoulliKind::GFactor);
    if !takes_z && a.z.is_some() {
        return usage("--z is not used by this --kind");
    }
    match a.kind {
        BernoulliKind::Numbers => {
            let bs = bernoulli_numbers(n)?;
            let mut csv = Csv::new(&["k", "exact", "approx"]);
            let mut text = String::new();
            let mut rows = Vec::new();
            for (k, b) in bs.iter().enumerate() {
                csv.row([k.to_string(), b.to_string(), f(rational_to_f64(b))]);
                let _ = writeln!(text, "B_{k} = {b}");
                rows.push(serde_json::json!({"k": k, "value": b.to_string()}));
            }
            Ok(Report::new(rows, csv.finish(), text))
        }
        BernoulliKind::Poly | BernoulliKind::GFactor => {
            let b = b_partial_poly(n)?;
            let (poly, zeros, leading) = if a.kind == BernoulliKind::Poly {
                (b, None, None)
            } else {
                let lead = b.leading().map(|l| l.to_string());
                (g_factor(n)?, Some(trivial_zeros(n)), lead)
            };
            let mut csv = Csv::new(&["power", "coefficient"]);
            for (k, c) in poly.coeffs().iter().enumerate() {
                csv.row([k.to_string(), c.to_string()]);
            }
            let text = match (&zeros, &leading) {
                (Some(zs), Some(l)) => {
                    let lin: String = zs.iter().map(|r| format!("(z - {r})")).collect();
                    format!("b_{n}(z) = ({l}) {lin} g_{n}(z)\ng_{n}(z) = {poly}\n")
                }
                _ => format!("b_{n}(z) = {poly}\n"),
            };
            let result = PolyResult {
                n,
                coefficients: poly.to_strings(),
                polynomial: poly.to_string(),
                trivial_zeros: zeros,
                leading,
            };
            Ok(Report::new(result, csv.finish(), text))
        }
        BernoulliKind::Partial | BernoulliKind::Limit => {
            let z = need_z(a)?;
            let (value, cutoff) = if a.kind == BernoulliKind::Partial {
                (b_partial(z, n)?, Some(n as u64))
            } else {
                (b_value(z)?, None)
            };
            Ok(point_report(PointValue {
                z,
                method: method_name(a.kind),
                n: cutoff,
                value,
            }))
        }
        BernoulliKind::Dc => {
            let z = need_z(a)?;
            let dc = b_dc(z, n)?;
            let mut csv = Csv::new(&["n", "re", "im"]);
            let mut text = String::new();
            for (k, v) in &dc.samples {
                let [r, i] = re_im(*v);
                csv.row([k.to_string(), r, i]);
                let _ = writeln!(text, "b_{k}(z) = {}", format_complex(*v));
            }
            let [r, i] = re_im(dc.extrapolated);
            csv.row(["extrapolated".to_string(), r, i]);
            let _ = writeln!(text, "extrapolated {} (spread {:e})", format_complex(dc.extrapolated), dc.spread);
            Ok(Report::new(&dc, csv.finish(), text))
        }
        BernoulliKind::ZetaFromB => {
            let z = need_z(a)?;
            let table = ctx.primes(n)?;
            let r = zeta_from_b(z, n, &table)?;
            let mut csv = Csv::new(&[
                "z_re", "z_im", "n_primes", "b_re", "b_im", "p_hat_re", "p_hat_im", "re", "im", "ref_re", "ref_im",
                "abs_err",
            ]);
            let mut cells: Vec<String> = re_im(z).into();
            cells.push(n.to_string());
            for v in [r.b, r.p_hat, r.value, r.reference] {
                cells.extend(re_im(v));
            }
            cells.push(f(r.abs_err));
            csv.row(cells);
            let mut text = format!(
                "{}\n# zeta_hat {}, abs_err {:e}\n",
                format_complex(r.value),
                format_complex(r.reference),
                r.abs_err
            );
            if r.b_vanishes {
                text.push_str("# b(1-z) vanishes here\n");
            }
            Ok(Report::new(r, csv.finish(), text))
        }
    }
}

fn gen_bernoulli_cmd(a: &GenBernoulliArgs) -> Out {
    let chi = parse_character(&a.chi)?;
    let mut rows = Vec::new();
    let mut csv = Csv::new(&["k", "exact", "re", "im"]);
    let mut text = format!("# character mod {}\n", chi.modulus());
    for k in 1..=a.n {
        let exact = gen_bernoulli_exact(&chi, k)?.map(|q| q.to_string());
        let value = gen_bernoulli(&chi, k)?;
        let [r, i] = re_im(value);
        csv.row([k.to_string(), exact.clone().unwrap_or_default(), r, i]);
        let shown = exact.clone().unwrap_or_else(|| format_complex(value));
        let _ = writeln!(text, "B_{k},chi = {shown}");
        rows.push(serde_json::json!({"k": k, "exact": exact, "value": value}));
    }
    let result = serde_json::json!({"modulus": chi.modulus(), "values": chi.values(), "rows": rows});
    Ok(Report::new(result, csv.finish(), text))
}

fn stieltjes_cmd(a: &StieltjesArgs) -> Out {
    let set = StieltjesSet::compute(a.k, a.m)?;
    let mut csv = Csv::new(&["n", "gamma"]);
    let mut text = String::new();
    for (n, g) in set.gammas.iter().enumerate() {
        csv.row([n.to_string(), f(*g)]);
        let _ = writeln!(text, "gamma_{n} = {g:.17e}");
    }
    Ok(Report::new(&set, csv.finish(), text))
}

#[derive(Serialize)]
struct ZsumRow {
    n: u32,
    closed_form: Option<f64>,
    zero_sum: ZeroSum,
    diff: Option<f64>,
}

fn zsum(a: &ZsumArgs) -> Out {
    if a.n.is_empty() || a.n.contains(&0) {
        return usage("--n takes positive orders");
    }
    let mut table = match &a.zero_table {
        Some(p) => ZeroTable::load(p)?,
        None => ZeroTable::bundled(),
    };
    if let Some(k) = a.truncate {
        table = table.truncated(k);
    }
    let gammas = StieltjesSet::compute(2, a.m)?;
    let rows = a
        .n
        .iter()
        .map(|&n| {
            let zero_sum = z_sum_from_zeros(n, &table)?;
            let closed_form = if n <= 3 { Some(z_closed_form(n, &gammas)?) } else { None };
            Ok(ZsumRow {
                n,
                closed_form,
                diff: closed_form.map(|c| c - zero_sum.value),
                zero_sum,
            })
        })
        .collect::<zreg::Result<Vec<_>>>()?;

    // closed forms inverted back to the constants
    let closed = (1..=3).map(|n| z_closed_form(n, &gammas)).collect::<zreg::Result<Vec<_>>>()?;
    let round_trip = gammas_from_z(&closed)?;
    let round_trip_err = round_trip
        .gammas
        .iter()
        .zip(&gammas.gammas)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let sums = (1..=3)
        .map(|n| z_sum_from_zeros(n, &table).map(|s| s.value))
        .collect::<zreg::Result<Vec<_>>>()?;
    let from_zeros = gammas_from_z(&sums)?;
    let sign = gamma1_sign_check(sums[1], gammas.gammas[0], gammas.gammas[1]);

    let mut csv = Csv::new(&["n", "closed_form", "raw", "tail", "zero_sum", "diff"]);
    let mut text = String::new();
    let source = match table.source() {
        ZeroSource::File { path } => path.clone(),
        ZeroSource::Bundled => "bundled".into(),
        ZeroSource::Scan { .. } => "scan".into(),
    };
    let _ = writeln!(text, "# {} zeros from {source}", table.len());
    for r in &rows {
        let opt = |x: Option<f64>| x.map(f).unwrap_or_default();
        csv.row([
            r.n.to_string(),
            opt(r.closed_form),
            f(r.zero_sum.raw),
            f(r.zero_sum.tail),
            f(r.zero_sum.value),
            opt(r.diff),
        ]);
        let _ = writeln!(
            text,
            "Z({}) = {:.12} from zeros (tail {:.3e}){}",
            r.n,
            r.zero_sum.value,
            r.zero_sum.tail,
            r.closed_form
                .map(|c| format!(", closed form {c:.12}, diff {:.3e}", c - r.zero_sum.value))
                .unwrap_or_default()
        );
    }
    let _ = writeln!(text, "# inversion round trip: max |gamma error| = {round_trip_err:e}");
    let _ = writeln!(
        text,
        "# gamma_1 from the zero-sum Z(2): +pi^2/8 form {:.12}, -pi^2/8 form {:.12}, summed gamma_1 {:.12}",
        sign.plus_pi2_8, sign.minus_pi2_8, sign.reference
    );
    let _ = writeln!(
        text,
        "# consistent sign: {}",
        if sign.plus_is_consistent { "+pi^2/8" } else { "-pi^2/8" }
    );
    let result = serde_json::json!({
        "source": source,
        "count": table.len(),
        "gammas": gammas,
        "rows": rows,
        "round_trip": {"gammas": round_trip.gammas, "max_abs_err": round_trip_err},
        "gammas_from_zeros": from_zeros.gammas,
        "sign_check": sign,
    });
    Ok(Report::new(result, csv.finish(), text))
}

fn zeros(a: &ZerosArgs) -> Out {
    let (table, warnings) = match a.count {
        Some(count) => (ZeroTable::scan_first(count)?, Vec::new()),
        None => {
            let (t_min, t_max, step) = (
                a.t_min.unwrap_or(10.0),
                a.t_max.unwrap_or(50.0),
                a.step.unwrap_or(DEFAULT_SCAN_STEP),
            );
            let scan = scan_zeros(t_min, t_max, step)?;
            // the sequence index is only known when the scan starts below the first zero
            let first = if t_min < 14.0 { 1 } else { 0 };
            let t = ZeroTable::new(scan.ordinates, first, ZeroSource::Scan { t_min, t_max, step })?;
            (t, scan.warnings)
        }
    };
    let mut csv = Csv::new(&["k", "t"]);
    for (k, t) in table.ordinates().iter().enumerate() {
        csv.row([(k + 1).to_string(), f(*t)]);
    }
    let mut text = table.to_text();
    for w in &warnings {
        let _ = writeln!(text, "# warning: {w}");
    }
    let result = serde_json::json!({"table": table, "warnings": warnings});
    Ok(Report::new(result, csv.finish(), text))
}

fn curve(spec: &str) -> Result<(String, EllipticCurve), CliError> {
    if let Some(c) = bundled_curves().into_iter().find(|c| c.label == spec) {
        return Ok((c.label, c.curve));
    }
    Ok((spec.to_string(), spec.parse()?))
}

fn mode(b: BadPrimes) -> BadPrimeMode {
    match b {
        BadPrimes::Verbatim => BadPrimeMode::Verbatim,
        BadPrimes::Standard => BadPrimeMode::Standard,
    }
}

fn lfun(a: &LfunArgs, ctx: &Context) -> Out {
    let (label, e) = curve(&a.curve)?;
    let z = parse_complex(&a.z)?;
    if a.ladder.is_empty() {
        let n = a.n.unwrap_or(DEFAULT_CUTOFF);
        let table = ctx.primes(n)?;
        let l = EllipticL::new(e, &table, n)?.with_mode(mode(a.bad_primes));
        let value = l.partial(z, n)?;
        return Ok(point_report(PointValue {
            z,
            method: format!("l-partial {label}"),
            n: Some(n as u64),
            value,
        }));
    }
    check_ladder(&a.ladder)?;
    let need = 2 * max(&a.ladder);
    let table = ctx.primes(need)?;
    let l = EllipticL::new(e, &table, need)?.with_mode(mode(a.bad_primes));
    Ok(Report::table(&l.window_table(z, &a.ladder)?))
}

fn probe(a: &ProbeArgs, ctx: &Context) -> Out {
    let (label, e) = curve(&a.curve)?;
    check_ladder(&a.ladder)?;
    let need = max(&a.ladder);
    let table = ctx.primes(need)?;
    let p = EllipticL::new(e, &table, need)?.with_mode(mode(a.bad_primes)).probe(&a.ladder)?;
    let mut csv = Csv::new(&["n", "re", "im", "log_abs", "log_n", "log_log_n"]);
    for r in &p.rows {
        let [re, im] = re_im(r.value);
        csv.row([r.n.to_string(), re, im, f(r.log_abs), f(r.log_n), f(r.log_log_n)]);
    }
    let mut text = table_text(&p.to_table()?);
    let _ = writeln!(text, "# curve {label} [{}]", p.curve);
    let slope = |s: Option<f64>| s.map(|v| format!("{v:.4}")).unwrap_or_else(|| "n/a".into());
    let _ = writeln!(
        text,
        "# slope of log|L_n| against log n: {}, against log log n: {}",
        slope(p.slope_log_n),
        slope(p.slope_log_log_n)
    );
    let _ = writeln!(text, "# {}", p.commentary);
    let result = serde_json::json!({"label": label, "probe": p});
    Ok(Report::new(result, csv.finish(), text))
}

#[derive(Serialize)]
struct IdentityRow {
    #[serde(flatten)]
    report: IdentityReport,
    closed_form_count: u64,
    enumerated_count: Option<u64>,
}

fn identity(a: &IdentityArgs) -> Out {
    let rows = a
        .p
        .iter()
        .map(|&p| {
            let count = triple_set_size(p)?;
            Ok(IdentityRow {
                report: verify_identity(p)?,
                closed_form_count: count.closed_form,
                enumerated_count: count.enumerated,
            })
        })
        .collect::<zreg::Result<Vec<_>>>()?;
    let mut csv = Csv::new(&[
        "p",
        "lhs_re",
        "lhs_im",
        "rhs_re",
        "rhs_im",
        "abs_diff",
        "rhs_sqrt_minus_p_re",
        "rhs_sqrt_minus_p_im",
        "abs_diff_sqrt_minus_p",
        "b1",
        "b3",
        "triple_count",
        "closed_form_count",
        "enumerated_count",
    ]);
    let mut text = String::new();
    for row in &rows {
        let r = &row.report;
        let mut cells = vec![r.p.to_string()];
        cells.extend(re_im(r.lhs));
        cells.extend(re_im(r.rhs));
        cells.push(f(r.abs_diff));
        cells.extend(re_im(r.rhs_sqrt_minus_p));
        cells.push(f(r.abs_diff_sqrt_minus_p));
        cells.extend([r.b1.clone(), r.b3.clone(), r.triple_count.to_string(), row.closed_form_count.to_string()]);
        cells.push(row.enumerated_count.map(|c| c.to_string()).unwrap_or_default());
        csv.row(cells);
        let _ = writeln!(
            text,
            "p = {}: lhs {}, |lhs - rhs| = {:e} with sqrt(p), {:e} with sqrt(-p); B1 = {}, B3 = {}, |S| = {}",
            r.p,
            format_complex(r.lhs),
            r.abs_diff,
            r.abs_diff_sqrt_minus_p,
            r.b1,
            r.b3,
            r.triple_count
        );
    }
    Ok(Report::new(rows, csv.finish(), text))
}

fn special() -> Out {
    let rows = special_values_report()?;
    let mut csv = Csv::new(&[
        "z",
        "claimed",
        "computed_re",
        "computed_im",
        "abs_err",
        "b_cutoff",
        "b",
        "zeta_hat",
        "flag",
    ]);
    let mut text = String::new();
    for r in &rows {
        let [cr, ci] = re_im(r.computed);
        csv.row([
            f(r.z),
            f(r.claimed),
            cr,
            ci,
            f(r.abs_err),
            r.b_cutoff.to_string(),
            f(r.b),
            f(r.zeta_hat),
            r.flag.clone().unwrap_or_default(),
        ]);
        let _ = writeln!(
            text,
            "z = {}: P_hat = {} (claimed {}), abs_err {:e}{}",
            r.z,
            format_complex(r.computed),
            r.claimed,
            r.abs_err,
            r.flag.as_ref().map(|s| format!(" [{s}]")).unwrap_or_default()
        );
    }
    Ok(Report::new(rows, csv.finish(), text))
}
