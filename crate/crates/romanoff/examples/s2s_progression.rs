//! Counts of S′ (odd, coprimely representable as u² + v²) in arithmetic
//! progressions, against the k-uniform bound shape
//! (loglog(k+2)/k)·x/√(log x), plus the Mertens-style product over the
//! primes ≡ 3 (mod 4) dividing k.

use romanoff::arith::SpfTable;
use romanoff::moments::s2s_progression_ratio;

fn main() -> romanoff::Result<()> {
    let x = 1_000_000;
    let spf = SpfTable::new(x)?;

    println!("{:>6} {:>4} {:>8} {:>12} {:>10} {:>10}", "k", "l", "count", "bound ratio", "mertens", "regime");
    for (k, l) in [(1u64, 0i64), (4, 1), (8, 5), (21, 1), (100, 13), (625, 1)] {
        let r = s2s_progression_ratio(x, k, l, &spf)?;
        println!(
            "{:>6} {:>4} {:>8} {:>12.5} {:>10.5} {:>10}",
            k,
            l,
            r.count,
            r.bound_ratio,
            r.mertens_product,
            if r.regime_ok { "k<=sqrt(x)" } else { "outside" }
        );
    }
    println!("\neven classes are empty by parity:");
    let even = s2s_progression_ratio(x, 4, 2, &spf)?;
    println!("  k = 4, l = 2: count {}", even.count);
    Ok(())
}
