//! Bit-packed primality table and smallest-prime-factor table.
//!
//! Both tables are immutable after construction and safe to share across
//! threads. Construction is single-threaded and deterministic.

use crate::error::{Error, Result};

/// Bit-packed Eratosthenes table for `2..=limit`.
pub struct PrimeSieve {
    limit: u64,
    /// Bit `n` set means `n` is composite (0 and 1 are marked).
    composite: Vec<u64>,
}

impl PrimeSieve {
    pub fn new(limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::InvalidArgument(format!(
                "sieve limit must be at least 2, got {limit}"
            )));
        }
        let words = limit as usize / 64 + 1;
        let mut composite = vec![0u64; words];
        composite[0] |= 0b11; // 0 and 1
        let mut i: u64 = 2;
        while i * i <= limit {
            if composite[(i / 64) as usize] >> (i % 64) & 1 == 0 {
                let mut j = i * i;
                while j <= limit {
                    composite[(j / 64) as usize] |= 1 << (j % 64);
                    j += i;
                }
            }
            i += 1;
        }
        Ok(PrimeSieve { limit, composite })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Primality for `n <= limit`. Out-of-range queries are caller bugs.
    pub fn is_prime(&self, n: u64) -> bool {
        assert!(n <= self.limit, "is_prime({n}) beyond sieve limit {}", self.limit);
        self.composite[(n / 64) as usize] >> (n % 64) & 1 == 0
    }

    /// All primes `2..=limit` in increasing order.
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        (2..=self.limit).filter(move |&n| self.composite[(n / 64) as usize] >> (n % 64) & 1 == 0)
    }

    /// Primes in `lo..=hi` (requires `hi <= limit`).
    pub fn primes_in(&self, lo: u64, hi: u64) -> impl Iterator<Item = u64> + '_ {
        assert!(hi <= self.limit, "primes_in({lo}, {hi}) beyond sieve limit {}", self.limit);
        (lo.max(2)..=hi).filter(move |&n| self.composite[(n / 64) as usize] >> (n % 64) & 1 == 0)
    }

    /// π(x), the number of primes not exceeding `x`.
    pub fn prime_count(&self, x: u64) -> Result<u64> {
        if x > self.limit {
            return Err(Error::SieveExhausted { needed: x, have: self.limit });
        }
        Ok(self.primes_in(2, x).count() as u64)
    }

    /// Fails with the required limit when `x` is out of range.
    pub fn require(&self, x: u64) -> Result<()> {
        if x > self.limit {
            return Err(Error::SieveExhausted { needed: x, have: self.limit });
        }
        Ok(())
    }
}

/// π(x; k, l) together with the ratio π(x;k,l)·φ(k)·log x / x that tracks the
/// Brun–Titchmarsh shape x/(φ(k) log x).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProgressionCount {
    pub count: u64,
    pub bt_ratio: f64,
}

/// Count primes `p <= x` with `p ≡ l (mod k)`.
pub fn prime_count_progression(
    x: u64,
    k: u64,
    l: i64,
    sieve: &PrimeSieve,
) -> Result<ProgressionCount> {
    if k == 0 {
        return Err(Error::InvalidArgument("progression modulus k must be >= 1".into()));
    }
    sieve.require(x)?;
    let residue = l.rem_euclid(k as i64) as u64;
    let count = sieve.primes_in(2, x).filter(|p| p % k == residue).count() as u64;
    let phi_k = crate::arith::factor::euler_phi_u64(k, sieve)?;
    let bt_ratio = if x == 0 {
        0.0
    } else {
        count as f64 * phi_k as f64 * (x as f64).ln() / x as f64
    };
    Ok(ProgressionCount { count, bt_ratio })
}

/// Smallest-prime-factor table for `2..=limit`; backbone of bulk
/// factorization and of the two-squares membership tests.
pub struct SpfTable {
    limit: u64,
    spf: Vec<u32>,
}

impl SpfTable {
    pub fn new(limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::InvalidArgument(format!(
                "spf limit must be at least 2, got {limit}"
            )));
        }
        if limit >= u32::MAX as u64 {
            return Err(Error::InvalidArgument(format!(
                "spf limit {limit} exceeds the 32-bit table range"
            )));
        }
        let mut spf = vec![0u32; limit as usize + 1];
        for i in 2..=limit as usize {
            if spf[i] == 0 {
                for j in (i..=limit as usize).step_by(i) {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                }
            }
        }
        Ok(SpfTable { limit, spf })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn is_prime(&self, n: u64) -> bool {
        assert!(n <= self.limit, "spf query {n} beyond limit {}", self.limit);
        n >= 2 && self.spf[n as usize] as u64 == n
    }

    /// Smallest prime factor of `n` (requires `2 <= n <= limit`).
    pub fn smallest_factor(&self, n: u64) -> u64 {
        assert!(n >= 2 && n <= self.limit, "spf query {n} out of range");
        self.spf[n as usize] as u64
    }

    pub fn require(&self, x: u64) -> Result<()> {
        if x > self.limit {
            return Err(Error::SieveExhausted { needed: x, have: self.limit });
        }
        Ok(())
    }
}
