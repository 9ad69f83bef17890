//! Shared fixtures for the criterion benches.

use zreg::PrimeTable;

/// Prime table large enough for every bench in this crate.
pub fn bench_primes() -> PrimeTable {
    PrimeTable::sieve_to_count(200_000).expect("sieve")
}
