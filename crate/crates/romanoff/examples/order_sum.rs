//! Multiplicative-order sums: the convergent Σ log p/(p·h_a(p)^ε) and the
//! growth profile G(t) = Σ_{h_a(p) <= t} log p / p, whose log t pace is what
//! makes the sum converge.

use romanoff::arith::PrimeSieve;
use romanoff::moments::{order_growth_profile, order_sum_partial};

fn main() -> romanoff::Result<()> {
    let a = 2;
    let cap = 100_000;
    let sieve = PrimeSieve::new(cap)?;

    println!("partial sums of log p / (p·h_{a}(p)^(1/2)):");
    for x in [1_000u64, 10_000, 100_000] {
        let v = order_sum_partial(a, 0.5, x, &sieve)?;
        println!("  x = {x:>7}: {v:.6}");
    }

    println!("\nG(t) over the table of orders for p <= {cap}:");
    let ts = [10u64, 100, 1_000, 10_000];
    for g in order_growth_profile(a, &ts, cap, &sieve)? {
        println!("  t = {:>6}: G = {:.4}, G/log t = {:.4}", g.t, g.g, g.ratio_to_log_t);
    }
    Ok(())
}
