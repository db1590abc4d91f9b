//! Exact factorization and the totient, driven by the sieve tables.

use crate::arith::sieve::{PrimeSieve, SpfTable};
use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Prime factorization as (prime, exponent) pairs with strictly increasing
/// primes and exponents >= 1. The empty list factors 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Factor `n >= 1` by trial division over sieve primes. The sieve must
    /// reach √n (more precisely √ of the unfactored remainder), otherwise
    /// the call reports the limit it would need.
    pub fn of(n: u64, sieve: &PrimeSieve) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("cannot factor 0".into()));
        }
        let mut factors = Vec::new();
        let mut rem = n;
        for p in sieve.primes() {
            if (p as u128) * (p as u128) > rem as u128 {
                break;
            }
            if rem.is_multiple_of(p) {
                let mut e = 0u32;
                while rem.is_multiple_of(p) {
                    rem /= p;
                    e += 1;
                }
                factors.push((p, e));
            }
        }
        if rem > 1 {
            // Either certified prime (all p <= √rem were tried) or the sieve ran out.
            if (sieve.limit() as u128) * (sieve.limit() as u128) >= rem as u128 {
                factors.push((rem, 1));
            } else {
                return Err(Error::SieveExhausted { needed: isqrt(rem) + 1, have: sieve.limit() });
            }
        }
        Ok(Factorization { factors })
    }

    /// Factor `2 <= n <= spf.limit()` by walking the smallest-prime-factor chain.
    pub fn of_spf(n: u64, spf: &SpfTable) -> Self {
        let mut factors: Vec<(u64, u32)> = Vec::new();
        let mut rem = n;
        while rem > 1 {
            let p = spf.smallest_factor(rem);
            let mut e = 0u32;
            while rem.is_multiple_of(p) {
                rem /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        Factorization { factors }
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// ν(n): the number of distinct prime divisors.
    pub fn distinct_primes(&self) -> usize {
        self.factors.len()
    }

    pub fn product(&self) -> u64 {
        self.factors
            .iter()
            .fold(1u64, |acc, &(p, e)| acc * p.pow(e))
    }
}

/// Euler's totient from an explicit factorization of `n`. Exact integer
/// arithmetic: φ(n) = ∏ p^(e-1) (p-1).
pub fn euler_phi(n: u64, factorization: &Factorization) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidArgument("phi(0) is undefined".into()));
    }
    if factorization.product() != n {
        return Err(Error::InvalidArgument(format!(
            "factorization does not factor {n}"
        )));
    }
    let mut phi = 1u64;
    for &(p, e) in factorization.factors() {
        phi *= p.pow(e - 1) * (p - 1);
    }
    Ok(phi)
}

/// φ(n) with the factorization done internally.
pub fn euler_phi_u64(n: u64, sieve: &PrimeSieve) -> Result<u64> {
    let f = Factorization::of(n, sieve)?;
    euler_phi(n, &f)
}

/// φ(n) through the spf table; `n <= spf.limit()`.
pub fn euler_phi_spf(n: u64, spf: &SpfTable) -> u64 {
    if n == 1 {
        return 1;
    }
    euler_phi(n, &Factorization::of_spf(n, spf)).expect("spf factorization is exact")
}

/// Integer square root.
pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as u64;
    while (r as u128) * (r as u128) > n as u128 {
        r -= 1;
    }
    while ((r + 1) as u128) * ((r + 1) as u128) <= n as u128 {
        r += 1;
    }
    r
}
