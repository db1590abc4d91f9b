//! Shifted counts A(x, r) = #{a <= x : a + r in A} against the sieve-bound
//! shape (r/φ(r))·x/η(x)². The normalized ratio should stay bounded over r;
//! its largest values sit at highly composite shifts.

use romanoff::engine::shifted_bound_ratio;
use romanoff::sequences::{SequenceSpec, Tables};

fn main() -> romanoff::Result<()> {
    let x = 100_000;
    let r_max = 210;
    let tables = Tables::new(x + r_max, x + r_max)?;
    for spec in [SequenceSpec::primes(), SequenceSpec::primitive_two_squares()] {
        let res = shifted_bound_ratio(&spec, x, r_max, &tables)?;
        println!("A = {spec}, x = {x}");
        println!("  sup ratio {:.4} attained at r = {}", res.sup_ratio, res.arg_r);
        let mut top: Vec<_> = res.grid.clone();
        top.sort_by(|a, b| b.2.total_cmp(&a.2));
        println!("  top shifts:");
        for (r, count, ratio) in top.into_iter().take(5) {
            println!("    r = {r:>4}  A(x,r) = {count:>6}  ratio = {ratio:.4}");
        }
        println!();
    }
    Ok(())
}
