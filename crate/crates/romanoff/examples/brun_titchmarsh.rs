//! Primes in arithmetic progressions: π(x; k, l) with the normalized ratio
//! π(x;k,l)·φ(k)·log x / x, which the progression bound keeps below an
//! absolute constant for k up to x^a.

use romanoff::arith::{gcd, prime_count_progression, PrimeSieve};

fn main() -> romanoff::Result<()> {
    let x = 1_000_000;
    let sieve = PrimeSieve::new(x)?;

    println!("{:>6} {:>4} {:>10} {:>10}", "k", "l", "pi(x;k,l)", "ratio");
    let mut sup = 0.0f64;
    for k in [3u64, 4, 5, 12, 30, 210, 1001] {
        for l in 1..k.min(12) {
            if gcd(k, l) != 1 {
                continue;
            }
            let res = prime_count_progression(x, k, l as i64, &sieve)?;
            sup = sup.max(res.bt_ratio);
            println!("{:>6} {:>4} {:>10} {:>10.5}", k, l, res.count, res.bt_ratio);
        }
    }
    println!("sup of the normalized ratio over this grid: {sup:.5}");
    Ok(())
}
