//! Second-moment bookkeeping for r(n): the diagonal S1, the collision terms
//! S2 = S3, and the exact identity sum r(n)² = S1 + 2·S2.

use romanoff::arith::Polynomial;
use romanoff::engine::{moment_decomposition, representation_counts, s2_shift_surrogate};
use romanoff::sequences::{SequenceSpec, Tables};

fn main() -> romanoff::Result<()> {
    let x = 10_000;
    let tables = Tables::new(2 * x, 2 * x)?;
    let pairs = [
        (SequenceSpec::primes(), SequenceSpec::power_poly(2, Polynomial::identity())?),
        (
            SequenceSpec::primitive_two_squares(),
            SequenceSpec::poly_of_primes(Polynomial::new(vec![0, 0, 1])?)?,
        ),
    ];
    for (a, b) in pairs {
        let profile = representation_counts(&a, &b, x, &tables)?;
        let m = moment_decomposition(&profile)?;
        let surrogate = s2_shift_surrogate(&profile, &tables)?;
        println!("A = {a}");
        println!("B = {b}");
        println!("  S1 = {}, S2 = S3 = {}", m.s1, m.s2);
        println!("  sum r  = {}", m.sum_r);
        println!("  sum r² = {} = S1 + 2·S2", m.sum_r2);
        println!("  S2 <= shift surrogate {surrogate}");
        println!();
    }
    Ok(())
}
