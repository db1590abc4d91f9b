//! Congruence statistics of curve orders: #{3 <= q <= x : #E(F_q) ≡ α (mod n)}
//! for every residue class, with the ratio count·φ(n)·log x / x tracking the
//! main-term shape x/(φ(n)·log x). Classes partition π(x) − 1 exactly.

use romanoff::arith::PrimeSieve;
use romanoff::elliptic::{curated_curve, order_congruence_count, CurveOrderTable};

fn main() -> romanoff::Result<()> {
    let x = 10_000;
    let sieve = PrimeSieve::new(x)?;
    let curve = curated_curve("a1b1").unwrap();
    let table = CurveOrderTable::build(&curve, x, &sieve)?;

    for n in [5u64, 12] {
        println!("curve {curve}, modulus n = {n}, x = {x}");
        let mut total = 0;
        for alpha in 0..n {
            let res = order_congruence_count(x, n, alpha as i64, true, &table, &sieve)?;
            total += res.count;
            println!("  #E ≡ {alpha:>2} (mod {n}): count {:>5}  ratio {:.4}", res.count, res.bound_ratio);
        }
        let everything = order_congruence_count(x, 1, 0, true, &table, &sieve)?.count;
        assert_eq!(total, everything);
        println!("  classes sum to {total} = π(x) − 1\n");
    }
    Ok(())
}
