//! Congruence root counts ρ(f, m) against the d·m^(1−1/d) bound shape for
//! content-coprime moduli. The absolute constant is never asserted — the
//! experiment reports the observed supremum.

use romanoff::arith::{gcd, konyagin_report, poly_congruence_roots, Polynomial};

fn main() -> romanoff::Result<()> {
    for coeffs in [vec![1i64, 0, 1], vec![3, 2, 0, 1]] {
        let f = Polynomial::new(coeffs)?;
        let mut sup = (0.0f64, 0u64);
        for m in 1..=2_000u64 {
            if gcd(f.content(), m) != 1 {
                continue;
            }
            let rep = konyagin_report(&f, m)?;
            if rep.bound_ratio > sup.0 {
                sup = (rep.bound_ratio, m);
            }
        }
        let roots = poly_congruence_roots(&f, sup.1)?;
        println!(
            "f = {f} (degree {}): sup ρ/(d·m^(1−1/d)) = {:.4} at m = {}, roots {:?}",
            f.degree(),
            sup.0,
            sup.1,
            roots
        );
    }
    Ok(())
}
