//! The congruence-clustering sum Σ_j Σ_p λ(x; j, p)·log p / p that controls
//! the second moment, normalized by C(x)². Each sequence family has its own
//! prime-cutoff exponent alpha; below x = e^16 the power families' cutoff
//! (log x)^(1/4) admits no prime at all and the sum is flagged degenerate.

use romanoff::arith::Polynomial;
use romanoff::sequences::{SequenceSpec, Tables};

fn main() -> romanoff::Result<()> {
    let tables = Tables::new(10_000, 10_000)?;
    let specs = [
        SequenceSpec::poly_of_primes(Polynomial::new(vec![0, 0, 1])?)?,
        SequenceSpec::poly_of_s_prime(Polynomial::new(vec![0, 0, 1])?)?,
        SequenceSpec::power_poly(2, Polynomial::new(vec![1, 0, 1])?)?,
    ];
    for spec in specs {
        let alpha = spec.lemma_alpha().unwrap();
        println!("B = {spec}, alpha = {alpha}");
        for x in [10_000u64, 100_000, 1_000_000] {
            let res = spec.lambda_weighted_sum(x, alpha, &tables)?;
            let count = spec.count(x, &tables)?;
            if res.degenerate {
                println!("  x = {x:>8}: cutoff {:.3} < 2, sum = 0 (degenerate)", res.prime_cutoff);
            } else {
                println!(
                    "  x = {x:>8}: C(x) = {count:>4}, sum = {:>12.4}, sum/C(x)² = {:.4}",
                    res.sum, res.ratio_to_count_sq
                );
            }
        }
        println!();
    }
    Ok(())
}
