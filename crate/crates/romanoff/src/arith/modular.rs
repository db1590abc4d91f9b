//! Modular exponentiation, the Legendre symbol, and multiplicative orders.
//!
//! Intermediate products are 128-bit, so any modulus below 2^64 is safe.

use crate::arith::factor::{isqrt, Factorization};
use crate::arith::sieve::PrimeSieve;
use crate::error::{Error, Result};

pub fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    assert!(m >= 1);
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, m);
        }
        base = mod_mul(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic trial-division primality; adequate for desk-scale inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = 5u64;
    while d <= isqrt(n) {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// Legendre symbol (a/p) by Euler's criterion: a^((p-1)/2) mod p.
pub fn legendre_symbol(a: i64, p: u64) -> Result<i8> {
    if p == 2 || !is_prime_u64(p) {
        return Err(Error::InvalidArgument(format!(
            "legendre symbol needs an odd prime modulus, got {p}"
        )));
    }
    let r = a.rem_euclid(p as i64) as u64;
    Ok(legendre_reduced(r, p))
}

/// Euler-criterion core for `0 <= a < p` with `p` already known to be an odd
/// prime. Point counting calls this in its inner loop.
pub(crate) fn legendre_reduced(a: u64, p: u64) -> i8 {
    if a == 0 {
        return 0;
    }
    let e = mod_pow(a, (p - 1) / 2, p);
    if e == 1 {
        1
    } else {
        debug_assert_eq!(e, p - 1);
        -1
    }
}

/// h_a(p): the least h >= 1 with a^h ≡ 1 (mod p). Factors p-1 and descends
/// through divisors, so the result always divides p-1.
pub fn multiplicative_order(a: u64, p: u64, sieve: &PrimeSieve) -> Result<u64> {
    if a < 2 {
        return Err(Error::InvalidArgument(format!("order base must be >= 2, got {a}")));
    }
    if !is_prime_u64(p) {
        return Err(Error::InvalidArgument(format!("order modulus {p} is not prime")));
    }
    let r = a % p;
    if r == 0 {
        return Err(Error::InvalidArgument(format!("{p} divides {a}; order undefined")));
    }
    let mut order = p - 1;
    for &(q, e) in Factorization::of(p - 1, sieve)?.factors() {
        for _ in 0..e {
            if mod_pow(r, order / q, p) == 1 {
                order /= q;
            } else {
                break;
            }
        }
    }
    debug_assert_eq!(mod_pow(r, order, p), 1);
    Ok(order)
}
