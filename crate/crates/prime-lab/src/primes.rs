//! Prime generation and the weighted frequency/amplitude tables behind every sum.

use std::io::{BufRead, BufWriter, Write};
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::sum::kahan_sum;

/// Largest cutoff accepted by [`sieve_primes`]; beyond it the prime and log
/// tables alone would run into hundreds of megabytes.
pub const DEFAULT_SIEVE_CEILING: u64 = 100_000_000;

/// Cutoffs above this are sieved segment by segment instead of with one flat bit array.
const SEGMENTED_THRESHOLD: u64 = 10_000_000;

/// Odd numbers covered by one sieve segment (2^21 odds = 4.2e6 integers per segment).
const SEGMENT_ODDS: usize = 1 << 21;

/// Ascending primes up to a cutoff with their natural logarithms.
///
/// The logs are the angular frequencies (radians per unit t) of the signal
/// components; they are precomputed once and shared immutably.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    cutoff: u64,
    primes: Arc<Vec<u64>>,
    logs: Arc<Vec<f64>>,
}

impl PrimeTable {
    pub fn cutoff(&self) -> u64 {
        self.cutoff
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn logs(&self) -> &[f64] {
        &self.logs
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// Table restricted to primes `<= cutoff`. Shares no storage with `self`
    /// but reproduces the exact same prefix of primes and logs.
    pub fn truncated(&self, cutoff: u64) -> PrimeTable {
        let n = self.primes.partition_point(|&p| p <= cutoff);
        PrimeTable {
            cutoff,
            primes: Arc::new(self.primes[..n].to_vec()),
            logs: Arc::new(self.logs[..n].to_vec()),
        }
    }

    fn from_primes(cutoff: u64, primes: Vec<u64>) -> Self {
        let logs = primes.iter().map(|&p| (p as f64).ln()).collect();
        PrimeTable {
            cutoff,
            primes: Arc::new(primes),
            logs: Arc::new(logs),
        }
    }
}

/// Primes with per-prime amplitudes `p^(-x)`.
#[derive(Debug, Clone)]
pub struct WeightedEnsemble {
    table: PrimeTable,
    exponent: f64,
    weights: Arc<Vec<f64>>,
}

impl WeightedEnsemble {
    pub fn table(&self) -> &PrimeTable {
        &self.table
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Triangle-inequality bound on the raw signal: sum of all weights.
    pub fn amplitude_bound(&self) -> f64 {
        kahan_sum(self.weights.iter().copied())
    }
}

/// All primes up to `cutoff`, with logarithms precomputed.
///
/// Uses a flat odd-only bit sieve up to 10^7 and a segmented sieve above,
/// capped at [`DEFAULT_SIEVE_CEILING`].
pub fn sieve_primes(cutoff: u64) -> Result<PrimeTable> {
    sieve_primes_with_limit(cutoff, DEFAULT_SIEVE_CEILING)
}

/// [`sieve_primes`] with an explicit capacity ceiling.
pub fn sieve_primes_with_limit(cutoff: u64, ceiling: u64) -> Result<PrimeTable> {
    if cutoff < 2 {
        return Err(Error::EmptyRange { cutoff });
    }
    if cutoff > ceiling {
        return Err(Error::Capacity { cutoff, ceiling });
    }
    let primes = if cutoff <= SEGMENTED_THRESHOLD {
        flat_sieve(cutoff)
    } else {
        segmented_sieve(cutoff)
    };
    Ok(PrimeTable::from_primes(cutoff, primes))
}

/// Per-prime weights `p^(-x) = exp(-x ln p)` over the table.
pub fn build_ensemble(table: &PrimeTable, exponent: f64) -> Result<WeightedEnsemble> {
    if !(exponent > 0.0) {
        return Err(Error::NonPositiveExponent { exponent });
    }
    let weights = table
        .logs()
        .iter()
        .map(|&lp| (-exponent * lp).exp())
        .collect();
    Ok(WeightedEnsemble {
        table: table.clone(),
        exponent,
        weights: Arc::new(weights),
    })
}

/// Odd-only bit sieve; adequate up to [`SEGMENTED_THRESHOLD`].
fn flat_sieve(cutoff: u64) -> Vec<u64> {
    let n = cutoff as usize;
    let mut primes = Vec::with_capacity(estimate_prime_count(cutoff));
    if n >= 2 {
        primes.push(2);
    }
    // bit i represents the odd number 2i + 3
    let odds = if n >= 3 { (n - 3) / 2 + 1 } else { 0 };
    let mut composite = vec![0u64; odds.div_ceil(64)];
    let mut i = 0usize;
    while (2 * i + 3) * (2 * i + 3) <= n {
        if composite[i / 64] & (1 << (i % 64)) == 0 {
            let p = 2 * i + 3;
            let mut j = (p * p - 3) / 2;
            while j < odds {
                composite[j / 64] |= 1 << (j % 64);
                j += p;
            }
        }
        i += 1;
    }
    for i in 0..odds {
        if composite[i / 64] & (1 << (i % 64)) == 0 {
            primes.push((2 * i + 3) as u64);
        }
    }
    primes
}

/// Segmented odd-only sieve for large cutoffs; memory stays bounded by the
/// segment size plus the base primes up to sqrt(cutoff).
fn segmented_sieve(cutoff: u64) -> Vec<u64> {
    let root = (cutoff as f64).sqrt() as u64 + 1;
    let base = flat_sieve(root);
    let mut primes = Vec::with_capacity(estimate_prime_count(cutoff));
    primes.push(2);

    let mut composite = vec![0u64; SEGMENT_ODDS / 64];
    let mut low = 3u64; // first odd of the segment
    while low <= cutoff {
        let span = 2 * SEGMENT_ODDS as u64; // integers covered by the segment
        let high = (low + span - 2).min(cutoff); // last odd candidate
        composite.iter_mut().for_each(|w| *w = 0);
        for &p in base.iter().skip(1) {
            if p * p > high {
                break;
            }
            let mut start = p * p;
            if start < low {
                start = low.div_ceil(p) * p;
                if start % 2 == 0 {
                    start += p;
                }
            }
            let mut m = start;
            while m <= high {
                let idx = ((m - low) / 2) as usize;
                composite[idx / 64] |= 1 << (idx % 64);
                m += 2 * p;
            }
        }
        let count = ((high - low) / 2 + 1) as usize;
        for i in 0..count {
            if composite[i / 64] & (1 << (i % 64)) == 0 {
                primes.push(low + 2 * i as u64);
            }
        }
        low += span;
    }
    primes
}

fn estimate_prime_count(cutoff: u64) -> usize {
    let x = cutoff as f64;
    (x / x.ln() * 1.2) as usize + 16
}

/// Deterministic Miller-Rabin for u64; used only to validate cache files.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0u32;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
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

/// Write the table's primes to `path`, one per line ascending.
pub fn write_prime_cache(path: &Path, table: &PrimeTable) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    for &p in table.primes() {
        writeln!(w, "{p}").map_err(|e| Error::io(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Load a cached prime file if it covers `cutoff`; `Ok(None)` when it does not.
///
/// Entries are validated (ascending, prime) so a stale or hand-edited cache
/// cannot silently corrupt downstream sums.
pub fn load_prime_cache(path: &Path, cutoff: u64) -> Result<Option<PrimeTable>> {
    if !path.exists() {
        return Ok(None);
    }
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = std::io::BufReader::new(file);
    let mut primes = Vec::new();
    let mut last = 0u64;
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let p: u64 = text.parse().map_err(|_| Error::CacheInvalid {
            path: path.to_path_buf(),
            reason: format!("line {}: {:?} is not an integer", idx + 1, text),
        })?;
        if p <= last {
            return Err(Error::CacheInvalid {
                path: path.to_path_buf(),
                reason: format!("line {}: entries must be strictly ascending", idx + 1),
            });
        }
        if !is_prime_u64(p) {
            return Err(Error::CacheInvalid {
                path: path.to_path_buf(),
                reason: format!("line {}: {} is not prime", idx + 1, p),
            });
        }
        last = p;
        primes.push(p);
    }
    // A cache whose largest entry is below the cutoff covers the request only
    // if the gap (last, cutoff] is prime-free; otherwise entries are missing.
    if last < cutoff && (last + 1..=cutoff).any(is_prime_u64) {
        return Ok(None);
    }
    primes.retain(|&p| p <= cutoff);
    Ok(Some(PrimeTable::from_primes(cutoff, primes)))
}

/// Sieve with a read-through cache file: load when the file covers the
/// cutoff, otherwise sieve and rewrite the cache.
pub fn sieve_primes_cached(cutoff: u64, cache: &Path) -> Result<PrimeTable> {
    if let Some(table) = load_prime_cache(cache, cutoff)? {
        return Ok(table);
    }
    let table = sieve_primes(cutoff)?;
    write_prime_cache(cache, &table)?;
    Ok(table)
}
