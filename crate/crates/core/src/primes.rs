//! The prime sequence `p_1 = 2, p_2 = 3, …` behind every truncated Euler
//! product: a segmented sieve, 1-based indexing, the `n+1..=2n` window and a
//! small binary persistence format.
//!
//! File layout (all integers little-endian `u64`):
//!
//! ```text
//! magic "ZREGPRM1" | count | sieve limit | p_1 | p_2 | ... | p_count
//! ```

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Default cap on the number of primes a table may be asked to hold.
pub const DEFAULT_COUNT_CAP: u64 = 100_000_000;

const MAGIC: &[u8; 8] = b"ZREGPRM1";
const SEGMENT: u64 = 1 << 18;

/// Ascending table of the first primes, indexable from 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    primes: Vec<u64>,
    limit: u64,
}

impl PrimeTable {
    /// Wraps an explicit list after checking the table invariants.
    pub fn from_primes(primes: Vec<u64>, limit: u64) -> Result<Self> {
        validate(&primes, limit)?;
        Ok(Self { primes, limit })
    }

    /// All primes up to and including `limit`.
    pub fn sieve_to_limit(limit: u64) -> Self {
        Self {
            primes: segmented_sieve(limit),
            limit,
        }
    }

    /// A table holding at least the first `n` primes.
    pub fn sieve_to_count(n: u64) -> Result<Self> {
        Self::sieve_to_count_capped(n, DEFAULT_COUNT_CAP)
    }

    pub fn sieve_to_count_capped(n: u64, cap: u64) -> Result<Self> {
        if n > cap {
            return Err(Error::Capacity {
                requested: n,
                cap,
            });
        }
        let mut limit = upper_bound_nth_prime(n.max(1));
        loop {
            let table = Self::sieve_to_limit(limit);
            if table.primes.len() as u64 >= n {
                return Ok(table);
            }
            limit = limit.saturating_mul(2);
        }
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.primes
    }

    /// The `k`-th prime, 1-based.
    pub fn nth(&self, k: usize) -> Option<u64> {
        k.checked_sub(1).and_then(|i| self.primes.get(i).copied())
    }

    /// The first `n` primes.
    pub fn first(&self, n: usize) -> Result<&[u64]> {
        self.require(n)?;
        Ok(&self.primes[..n])
    }

    /// Primes with indices `n+1..=2n`.
    pub fn window(&self, n: usize) -> Result<&[u64]> {
        self.range(n, 2 * n)
    }

    /// Primes with indices `from+1..=to`.
    pub fn range(&self, from: usize, to: usize) -> Result<&[u64]> {
        if from > to {
            return Err(Error::InvalidInput(format!("empty index range {from}..{to}")));
        }
        self.require(to)?;
        Ok(&self.primes[from..to])
    }

    pub fn require(&self, needed: usize) -> Result<()> {
        if self.primes.len() < needed {
            Err(Error::InsufficientTable {
                needed,
                available: self.primes.len(),
            })
        } else {
            Ok(())
        }
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        let mut buf = Vec::with_capacity(24 + 8 * self.primes.len());
        buf.extend_from_slice(MAGIC);
        buf.extend_from_slice(&(self.primes.len() as u64).to_le_bytes());
        buf.extend_from_slice(&self.limit.to_le_bytes());
        for p in &self.primes {
            buf.extend_from_slice(&p.to_le_bytes());
        }
        w.write_all(&buf)?;
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        if bytes.len() < 24 {
            return Err(Error::Format("prime table header truncated".into()));
        }
        if &bytes[..8] != MAGIC {
            return Err(Error::Format("bad prime table magic".into()));
        }
        let word = |i: usize| u64::from_le_bytes(bytes[i..i + 8].try_into().unwrap());
        let count = word(8);
        let limit = word(16);
        let expected = count
            .checked_mul(8)
            .and_then(|b| b.checked_add(24))
            .ok_or_else(|| Error::Format("prime count overflows".into()))?;
        if bytes.len() as u64 != expected {
            return Err(Error::Format(format!(
                "prime table body has {} bytes, header promises {}",
                bytes.len() - 24,
                expected - 24
            )));
        }
        let primes: Vec<u64> = (0..count as usize).map(|k| word(24 + 8 * k)).collect();
        Self::from_primes(primes, limit)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut file = fs::File::create(path)?;
        self.write_to(&mut file)?;
        file.sync_all()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let file = fs::File::open(path)?;
        Self::read_from(std::io::BufReader::new(file))
    }

    /// Loads `path` when it holds at least `n` primes, otherwise sieves and
    /// rewrites the cache.
    pub fn load_or_build(path: impl AsRef<Path>, n: u64) -> Result<Self> {
        let path = path.as_ref();
        if path.exists() {
            let table = Self::load(path)?;
            if table.len() as u64 >= n {
                return Ok(table);
            }
        }
        let table = Self::sieve_to_count(n)?;
        if let Some(dir) = path.parent() {
            if !dir.as_os_str().is_empty() {
                fs::create_dir_all(dir)?;
            }
        }
        table.save(path)?;
        Ok(table)
    }
}

fn validate(primes: &[u64], limit: u64) -> Result<()> {
    if let Some(&first) = primes.first() {
        if first != 2 {
            return Err(Error::Invariant(format!("first prime is {first}, expected 2")));
        }
    }
    if let Some(k) = primes.windows(2).position(|w| w[0] >= w[1]) {
        return Err(Error::Invariant(format!(
            "table not strictly increasing at index {}: {} then {}",
            k + 1,
            primes[k],
            primes[k + 1]
        )));
    }
    if let Some(&last) = primes.last() {
        if last > limit {
            return Err(Error::Invariant(format!(
                "last prime {last} exceeds sieve limit {limit}"
            )));
        }
    }
    Ok(())
}

/// Upper bound for the n-th prime (Rosser–Schoenfeld for n ≥ 6).
pub fn upper_bound_nth_prime(n: u64) -> u64 {
    if n < 6 {
        return 15;
    }
    let x = n as f64;
    (x * (x.ln() + x.ln().ln())).ceil() as u64 + 3
}

fn simple_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn segmented_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let root = (limit as f64).sqrt() as u64 + 1;
    let base: Vec<u64> = simple_sieve(root).into_iter().filter(|&p| p > 2).collect();
    let estimate = if limit > 10 {
        let x = limit as f64;
        (1.26 * x / x.ln()) as usize
    } else {
        8
    };
    let mut out = Vec::with_capacity(estimate);
    out.push(2);
    // segments over odd numbers only: index i represents lo + 2i
    let mut lo = 3u64;
    let mut flags = vec![false; SEGMENT as usize];
    while lo <= limit {
        let hi = (lo + 2 * SEGMENT - 1).min(limit);
        let count = ((hi - lo) / 2 + 1) as usize;
        flags[..count].iter_mut().for_each(|f| *f = false);
        for &p in &base {
            if p * p > hi {
                break;
            }
            let mut start = (p * p).max(lo.div_ceil(p) * p);
            if start % 2 == 0 {
                start += p;
            }
            let mut idx = ((start - lo) / 2) as usize;
            while idx < count {
                flags[idx] = true;
                idx += p as usize;
            }
        }
        for (i, &c) in flags[..count].iter().enumerate() {
            if !c {
                out.push(lo + 2 * i as u64);
            }
        }
        lo = hi + 1;
        if lo.is_multiple_of(2) {
            lo += 1;
        }
    }
    out
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn small_tables() {
        let t = PrimeTable::sieve_to_count(1).unwrap();
        assert_eq!(t.nth(1), Some(2));
        assert_eq!(t.nth(0), None);
        let t = PrimeTable::sieve_to_count(25).unwrap();
        assert_eq!(t.nth(25), Some(97));
        let oracle: Vec<u64> = (2..=97).filter(|&n| trial_division(n)).collect();
        assert_eq!(t.first(25).unwrap(), oracle.as_slice());
    }

    #[test]
    fn sieve_matches_trial_division_across_segments() {
        let limit = 3 * SEGMENT + 12_345;
        let t = PrimeTable::sieve_to_limit(limit);
        let oracle: Vec<u64> = simple_sieve(limit);
        assert_eq!(t.as_slice(), oracle.as_slice());
    }

    #[test]
    fn window_indices() {
        let t = PrimeTable::sieve_to_count(3000).unwrap();
        assert_eq!(t.window(1).unwrap(), &[3]);
        assert_eq!(t.window(2).unwrap(), &[5, 7]);
        let w = t.window(1000).unwrap();
        assert_eq!(w.len(), 1000);
        assert_eq!(Some(w[0]), t.nth(1001));
        assert_eq!(Some(w[999]), t.nth(2000));
        assert!(matches!(
            PrimeTable::sieve_to_count(10).unwrap().window(100),
            Err(Error::InsufficientTable { .. })
        ));
    }

    #[test]
    fn capacity_cap() {
        assert!(matches!(
            PrimeTable::sieve_to_count_capped(1001, 1000),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn miller_rabin() {
        for n in 0..2000u64 {
            assert_eq!(is_prime_u64(n), trial_division(n), "n = {n}");
        }
        assert!(is_prime_u64(18_446_744_073_709_551_557));
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to 2,3,5,7
    }

    #[test]
    fn round_trip_and_corruption() {
        let t = PrimeTable::sieve_to_count(100).unwrap();
        let mut buf = Vec::new();
        t.write_to(&mut buf).unwrap();
        assert_eq!(PrimeTable::read_from(buf.as_slice()).unwrap(), t);

        let truncated = &buf[..buf.len() - 5];
        assert!(matches!(
            PrimeTable::read_from(truncated),
            Err(Error::Format(_))
        ));

        let mut swapped = buf.clone();
        // swap p_3 and p_4
        let (a, b) = (24 + 16, 24 + 24);
        for i in 0..8 {
            swapped.swap(a + i, b + i);
        }
        assert!(matches!(
            PrimeTable::read_from(swapped.as_slice()),
            Err(Error::Invariant(_))
        ));

        let mut bad_magic = buf;
        bad_magic[0] = b'X';
        assert!(matches!(
            PrimeTable::read_from(bad_magic.as_slice()),
            Err(Error::Format(_))
        ));
    }
}
