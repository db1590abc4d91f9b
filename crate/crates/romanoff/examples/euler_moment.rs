//! Totient moment sums Σ (a_n/φ(a_n))^s against the decomposition
//! N + Σ_p ω(p)(log p)^s/p, where ω(p) counts the indices divisible by p.
//! The fitted constant ratio^(1/s) is the per-power constant the bound
//! exhibits on this input.

use romanoff::moments::euler_lemma_ratio;
use romanoff::sequences::{SequenceSpec, Tables};

fn main() -> romanoff::Result<()> {
    let x = 10_000;
    let tables = Tables::new(x, x)?;

    for spec in [SequenceSpec::primes(), SequenceSpec::primitive_two_squares()] {
        let terms = spec.enumerate(x, &tables)?;
        let values: Vec<u64> = terms.values().collect();
        println!("values = {spec}, N = {}", values.len());
        println!("{:>3} {:>14} {:>14} {:>10} {:>10}", "s", "lhs", "prime sum", "ratio", "fitted");
        for s in 1..=4 {
            let rec = euler_lemma_ratio(&values, x, 0.5, s, &tables.sieve)?;
            println!(
                "{:>3} {:>14.4} {:>14.4} {:>10.5} {:>10.5}",
                s, rec.lhs, rec.prime_sum, rec.ratio, rec.fitted_constant
            );
        }
        println!();
    }
    Ok(())
}
