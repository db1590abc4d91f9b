//! The classical density experiment: how many n <= x are a prime plus a
//! power of two, and how does the count above the threshold c1·B(x)/η(x)
//! compare with the lower-bound shape x·B(x)/(B(x) + ρ·η(x))?
//!
//! Run with `cargo run --release -p romanoff --example romanoff_density`.

use romanoff::arith::Polynomial;
use romanoff::engine::{density_report, representation_counts};
use romanoff::sequences::{SequenceSpec, Tables};

fn main() -> romanoff::Result<()> {
    let x = 100_000;
    let tables = Tables::new(x, 2)?;
    let spec_a = SequenceSpec::primes();
    let spec_b = SequenceSpec::power_poly(2, Polynomial::identity())?;

    let profile = representation_counts(&spec_a, &spec_b, x, &tables)?;
    println!("A = {spec_a}");
    println!("B = {spec_b}");
    println!(
        "x = {x}: A(x) = {}, B(x) = {}, sum r(n) = {}",
        profile.a_terms().count(),
        profile.b_terms().count(),
        profile.sum_r()
    );
    println!();
    println!("{:>10} {:>12} {:>12} {:>14} {:>12}", "c1", "threshold", "count", "bound shape", "c2");
    for exp in -6..=2 {
        let c1 = (exp as f64).exp2();
        let rep = density_report(&profile, c1)?;
        println!(
            "{:>10} {:>12.4} {:>12} {:>14.1} {:>12.4}",
            c1, rep.threshold, rep.count_above, rep.lower_bound_shape, rep.empirical_c2
        );
    }
    Ok(())
}
