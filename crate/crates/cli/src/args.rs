use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use zreg::{format_complex, parse_complex, DirichletCharacter};

#[derive(Debug, Parser)]
#[command(name = "zreg", version, about = "Regularized Euler products, prime zeta, Bernoulli relations and zero sums")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Write to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: Option<u16>,

    /// Binary prime table, built on first use. Defaults to
    /// $ZREG_CACHE_DIR/primes.bin, else primes are sieved in memory.
    #[arg(long, global = true, value_name = "PATH")]
    pub prime_cache: Option<PathBuf>,

    /// Recompute a JSON output file from its embedded config and compare.
    #[arg(long, value_name = "FILE")]
    pub check: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "kebab-case")]
pub enum Command {
    /// Regularized zeta and its truncations.
    Zeta(ZetaArgs),
    /// Ratio of window products f_n(z) across a ladder.
    FnRatio(LadderArgs),
    /// Symmetrized log sums over the prime window n+1..2n.
    WindowSum(WindowArgs),
    /// Prime zeta: partial sums, regularization, inversion, remainder.
    PrimeZeta(PrimeZetaArgs),
    /// Bernoulli numbers and the b_n(z) polynomials.
    Bernoulli(BernoulliArgs),
    /// Generalized Bernoulli numbers of a Dirichlet character.
    GenBernoulli(GenBernoulliArgs),
    /// Stieltjes constants by Euler-Maclaurin summation.
    Stieltjes(StieltjesArgs),
    /// Sums over zeta zeros against their closed forms.
    Zsum(ZsumArgs),
    /// Zeta zero ordinates on the critical line.
    Zeros(ZerosArgs),
    /// Truncated elliptic-curve L-function products.
    Lfun(LfunArgs),
    /// Partial products at z = 1 along a ladder.
    ProbeRank(ProbeArgs),
    /// Character-sum identity over ab + bc + ca = 0.
    Identity45(IdentityArgs),
    /// Special values of the regularized prime zeta.
    ReportSpecial,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Zeta(_) => "zeta",
            Command::FnRatio(_) => "fn-ratio",
            Command::WindowSum(_) => "window-sum",
            Command::PrimeZeta(_) => "prime-zeta",
            Command::Bernoulli(_) => "bernoulli",
            Command::GenBernoulli(_) => "gen-bernoulli",
            Command::Stieltjes(_) => "stieltjes",
            Command::Zsum(_) => "zsum",
            Command::Zeros(_) => "zeros",
            Command::Lfun(_) => "lfun",
            Command::ProbeRank(_) => "probe-rank",
            Command::Identity45(_) => "identity45",
            Command::ReportSpecial => "report-special",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZetaMethod {
    /// Accelerated alternating series with the functional equation.
    Eta,
    Cutoff,
    PartialSum,
    EulerProduct,
    Alternating,
    /// Reconstruction from the ratio of prime products.
    Ratio,
    /// Partial sum minus Euler product.
    SigmaGap,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct ZetaArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = complex_literal)]
    pub z: String,
    #[arg(long, value_enum, default_value_t = ZetaMethod::Eta)]
    pub method: ZetaMethod,
    /// Single cutoff.
    #[arg(long, value_parser = count, conflicts_with = "ladder")]
    pub n: Option<usize>,
    /// Comma-separated cutoffs.
    #[arg(long, value_parser = count, value_delimiter = ',')]
    #[serde(default)]
    pub ladder: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct LadderArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = complex_literal)]
    pub z: String,
    #[arg(long, value_parser = count, value_delimiter = ',', required = true)]
    pub ladder: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct WindowArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = complex_literal)]
    pub z: String,
    #[arg(long, value_parser = count, value_delimiter = ',', required = true)]
    pub ladder: Vec<usize>,
    /// Number of prime-power orders m in the log expansion.
    #[arg(long, default_value_t = 1)]
    pub depth: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PrimeZetaKind {
    Partial,
    Regularized,
    InclusionExclusion,
    Remainder,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct PrimeZetaArgs {
    #[arg(long, allow_hyphen_values = true, value_parser = complex_literal)]
    pub z: String,
    #[arg(long, value_enum, default_value_t = PrimeZetaKind::Partial)]
    pub method: PrimeZetaKind,
    /// Number of primes summed.
    #[arg(long, value_parser = count, conflicts_with = "ladder")]
    pub n: Option<usize>,
    #[arg(long, value_parser = count, value_delimiter = ',')]
    #[serde(default)]
    pub ladder: Vec<usize>,
    /// Inversion primes for inclusion-exclusion.
    #[arg(long, default_value_t = 6)]
    pub m: usize,
    /// Inversion depth, or the highest order m of the remainder
    /// (defaults 3 and 30).
    #[arg(long)]
    pub depth: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BernoulliKind {
    /// B_0..B_n.
    Numbers,
    /// The polynomial b_n(z).
    Poly,
    /// The cofactor g_n(z) left after removing the trivial zeros.
    GFactor,
    /// b_n(z) at a point.
    Partial,
    /// The limit b(z).
    Limit,
    /// Extrapolated b_n(z) at n/8, n/4, n/2, n.
    Dc,
    /// zeta_hat(z) rebuilt as -b(1-z) exp(P_hat(z)) over n primes.
    ZetaFromB,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct BernoulliArgs {
    #[arg(long, value_enum, default_value_t = BernoulliKind::Numbers)]
    pub kind: BernoulliKind,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, allow_hyphen_values = true, value_parser = complex_literal)]
    pub z: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct GenBernoulliArgs {
    /// legendre:P, principal:F or gen:P:J (chi(g) = exp(2 pi i j/(p-1))).
    #[arg(long, value_parser = character_spec)]
    pub chi: String,
    /// Highest order.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct StieltjesArgs {
    /// Highest order.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Summation cutoff.
    #[arg(long, value_parser = count_u64, default_value = "1000000")]
    pub m: u64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct ZsumArgs {
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    pub n: Vec<u32>,
    /// Zero ordinates, one per line. Defaults to $ZREG_CACHE_DIR/zeros.txt
    /// when present, else the bundled table.
    #[arg(long, value_name = "PATH")]
    pub zero_table: Option<PathBuf>,
    /// Use only the first K ordinates.
    #[arg(long)]
    pub truncate: Option<usize>,
    /// Cutoff for the Stieltjes constants in the closed forms.
    #[arg(long, value_parser = count_u64, default_value = "1000000")]
    pub m: u64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct ZerosArgs {
    /// First COUNT zeros from t = 10.
    #[arg(long, conflicts_with_all = ["t_min", "t_max", "step"])]
    pub count: Option<usize>,
    #[arg(long)]
    pub t_min: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long)]
    pub step: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BadPrimes {
    Verbatim,
    Standard,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct LfunArgs {
    /// Bundled label (11a1, 37a1, ...), "a1,a2,a3,a4,a6" or "cubic:a,b,c,d".
    #[arg(long)]
    pub curve: String,
    #[arg(long, allow_hyphen_values = true, value_parser = complex_literal, default_value = "1")]
    pub z: String,
    #[arg(long, value_parser = count, conflicts_with = "ladder")]
    pub n: Option<usize>,
    /// Window ratios L_{2n}/L_n across cutoffs.
    #[arg(long, value_parser = count, value_delimiter = ',')]
    #[serde(default)]
    pub ladder: Vec<usize>,
    #[arg(long, value_enum, default_value_t = BadPrimes::Verbatim)]
    pub bad_primes: BadPrimes,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct ProbeArgs {
    #[arg(long)]
    pub curve: String,
    #[arg(long, value_parser = count, value_delimiter = ',', default_value = "100,1000,10000")]
    pub ladder: Vec<usize>,
    #[arg(long, value_enum, default_value_t = BadPrimes::Verbatim)]
    pub bad_primes: BadPrimes,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct IdentityArgs {
    #[arg(long, value_delimiter = ',', default_value = "7,11,19,23,31")]
    pub p: Vec<u64>,
}

/// Validates a complex literal and returns it in canonical form.
fn complex_literal(s: &str) -> Result<String, String> {
    parse_complex(s).map(format_complex).map_err(|e| e.to_string())
}

/// Accepts `1000`, `1e4`, `10^5`.
fn count_u64(s: &str) -> Result<u64, String> {
    let bad = || format!("expected a nonnegative integer, got {s:?}");
    let t = s.trim();
    if let Ok(v) = t.parse::<u64>() {
        return Ok(v);
    }
    if let Some((b, e)) = t.split_once('^') {
        let b: u64 = b.parse().map_err(|_| bad())?;
        let e: u32 = e.parse().map_err(|_| bad())?;
        return b.checked_pow(e).ok_or_else(bad);
    }
    let v: f64 = t.parse().map_err(|_| bad())?;
    if v >= 0.0 && v.fract() == 0.0 && v < 1.8e19 {
        Ok(v as u64)
    } else {
        Err(bad())
    }
}

fn count(s: &str) -> Result<usize, String> {
    count_u64(s).and_then(|v| usize::try_from(v).map_err(|e| e.to_string()))
}

fn character_spec(s: &str) -> Result<String, String> {
    parse_character(s).map(|_| s.trim().to_string()).map_err(|e| e.to_string())
}

pub fn parse_character(s: &str) -> zreg::Result<DirichletCharacter> {
    let bad = || zreg::Error::InvalidInput(format!("cannot parse character spec {s:?}"));
    let parts: Vec<&str> = s.trim().split(':').collect();
    let num = |t: &str| t.parse::<u64>().map_err(|_| bad());
    match parts.as_slice() {
        ["legendre", p] => DirichletCharacter::legendre(num(p)?),
        ["principal", f] => DirichletCharacter::principal(num(f)?),
        ["gen", p, j] => DirichletCharacter::from_generator(num(p)?, num(j)?),
        _ => Err(bad()),
    }
}
