//! The elliptic totient moment Σ_{3<=p<=x} (f(#E)/φ(f(#E)))^s and its fitted
//! constant C(s, x) from the exp(s·log s + C·s)·π(x) shape. A uniform C
//! should emerge as s and x grow.

use romanoff::arith::{Polynomial, PrimeSieve};
use romanoff::elliptic::{curated_curve, CurveOrderTable};
use romanoff::moments::elliptic_totient_moment;

fn main() -> romanoff::Result<()> {
    let x = 10_000;
    let sieve = PrimeSieve::new(x + 300)?;
    let curve = curated_curve("a1b1").unwrap();
    let table = CurveOrderTable::build(&curve, x, &sieve)?;
    let f = Polynomial::identity();

    println!("curve {curve}, f(n) = n, x = {x}");
    println!("{:>3} {:>14} {:>10} {:>10}", "s", "lhs", "lhs/pi(x)", "fitted C");
    for s in 1..=4 {
        let rec = elliptic_totient_moment(&f, x, s, false, &table, &sieve)?;
        println!(
            "{:>3} {:>14.3} {:>10.4} {:>10.5}",
            s,
            rec.lhs,
            rec.lhs / rec.pi_x as f64,
            rec.fitted_c
        );
    }
    Ok(())
}
