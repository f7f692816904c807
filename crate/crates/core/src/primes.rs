//! Prime powers with von Mangoldt weights, and the diagonal prime sum.

use crate::reduce::pairwise_sum;
use crate::testfunc::TestFunction;
use crate::{Error, Real, Result};

/// Largest sieve limit accepted by [`build_table`].
pub const MAX_TABLE_LIMIT: u64 = 1 << 40;

const SEGMENT: u64 = 1 << 18;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrimePowerEntry<F> {
    pub n: u64,
    pub log_n: F,
    /// Λ(n) = log p for n = p^k.
    pub lambda: F,
}

/// Every n in [2, limit] with Λ(n) ≠ 0, sorted by n.
#[derive(Clone, Debug)]
pub struct PrimePowerTable<F> {
    limit: u64,
    entries: Vec<PrimePowerEntry<F>>,
}

impl<F: Real> PrimePowerTable<F> {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn entries(&self) -> &[PrimePowerEntry<F>] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Chebyshev ψ(limit) = Σ_{n <= limit} Λ(n).
    pub fn psi(&self) -> F {
        let terms: Vec<F> = self.entries.iter().map(|e| e.lambda).collect();
        pairwise_sum(&terms)
    }

    /// Entries with n <= `max_n`.
    pub fn up_to(&self, max_n: u64) -> &[PrimePowerEntry<F>] {
        let end = self.entries.partition_point(|e| e.n <= max_n);
        &self.entries[..end]
    }

    /// Errors unless the table reaches every n with f̂(log n / log T) ≠ 0.
    pub fn ensure_covers(&self, f: &TestFunction<F>, t: F) -> Result<u64> {
        let required = required_limit(f.alpha(), t);
        if self.limit < required {
            return Err(Error::TableTooSmall { required, available: self.limit });
        }
        Ok(required)
    }
}

/// Largest n that can satisfy log n < α log T, i.e. ⌊T^α⌋.
///
/// Rounded up by a few ulps so that exact powers like 10^6^{1/2} are not lost.
pub fn required_limit<F: Real>(alpha: F, t: F) -> u64 {
    let x = (alpha.to_f64_lossy() * t.to_f64_lossy().ln()).exp() * (1.0 + 1e-12);
    if x >= u64::MAX as f64 {
        u64::MAX
    } else {
        x.floor().max(1.0) as u64
    }
}

/// Segmented sieve of Eratosthenes over [2, limit], with all prime powers.
pub fn build_table<F: Real>(limit: u64) -> Result<PrimePowerTable<F>> {
    if limit < 2 {
        return Err(Error::InvalidParameter(format!("prime table limit must be >= 2, got {limit}")));
    }
    if limit > MAX_TABLE_LIMIT {
        return Err(Error::LimitExceeded(limit));
    }
    let root = limit.isqrt();
    let base = small_primes(root);
    let mut entries: Vec<PrimePowerEntry<F>> = Vec::new();
    let mut push = |n: u64, log_p: f64| {
        entries.push(PrimePowerEntry { n, log_n: F::lit((n as f64).ln()), lambda: F::lit(log_p) });
    };

    for &p in &base {
        let log_p = (p as f64).ln();
        let mut q = p;
        loop {
            push(q, log_p);
            match q.checked_mul(p) {
                Some(next) if next <= limit => q = next,
                _ => break,
            }
        }
    }

    let mut marks = vec![true; SEGMENT as usize];
    let mut lo = root + 1;
    while lo <= limit {
        let hi = (lo + SEGMENT - 1).min(limit);
        let len = (hi - lo + 1) as usize;
        marks[..len].fill(true);
        for &p in &base {
            if p * p > hi {
                break;
            }
            let start = (lo.div_ceil(p) * p).max(p * p);
            let mut m = start;
            while m <= hi {
                marks[(m - lo) as usize] = false;
                m += p;
            }
        }
        for (i, &is_prime) in marks[..len].iter().enumerate() {
            if is_prime {
                let p = lo + i as u64;
                push(p, (p as f64).ln());
            }
        }
        lo = hi + 1;
    }

    entries.sort_unstable_by_key(|e| e.n);
    Ok(PrimePowerTable { limit, entries })
}

fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64).collect()
}

/// Λ(n) by trial division.
pub fn von_mangoldt<F: Real>(n: u64) -> F {
    if n < 2 {
        return F::zero();
    }
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut m = n;
            while m.is_multiple_of(p) {
                m /= p;
            }
            return if m == 1 { F::lit((p as f64).ln()) } else { F::zero() };
        }
        p += 1;
    }
    F::lit((n as f64).ln())
}

/// (1/log²T) Σ_n 2Λ(n)²/n · f̂(log n / log T)².
pub fn diagonal_sum<F: Real>(f: &TestFunction<F>, t: F, table: &PrimePowerTable<F>) -> Result<F> {
    if !(t > F::one()) {
        return Err(Error::InvalidParameter(format!("T must exceed 1, got {t}")));
    }
    let required = table.ensure_covers(f, t)?;
    let log_t = t.ln();
    let two = F::lit(2.0);
    let terms: Vec<F> = table
        .up_to(required)
        .iter()
        .map(|e| {
            let w = f.ft_value(e.log_n / log_t);
            two * e.lambda * e.lambda / F::from_u64(e.n).unwrap() * w * w
        })
        .collect();
    Ok(pairwise_sum(&terms) / (log_t * log_t))
}
