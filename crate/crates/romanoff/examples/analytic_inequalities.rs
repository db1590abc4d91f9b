//! The two elementary inequalities behind the totient-moment bound:
//! Σ (log n)^s/n² <= 2·exp(s·log s), and y·log y − c·y >= −exp(c−1) with
//! equality exactly at y = exp(c−1).

use romanoff::moments::{analytic_inequalities, log_grid};

fn main() -> romanoff::Result<()> {
    let grid = log_grid(1e-3, 1e3, 1_000);
    let (sums, ents) = analytic_inequalities(20, 1_000_000, &[0.5, 1.0, 2.0, 5.0], &grid)?;

    println!("log-power sums up to N = 10^6:");
    for c in sums.iter().filter(|c| c.s % 5 == 0 || c.s == 1) {
        println!(
            "  s = {:>2}: sum = {:>12.5e}  bound 2·s^s = {:>12.5e}  margin {:.1e}",
            c.s,
            c.sum,
            c.bound,
            c.bound / c.sum
        );
    }

    println!("\nentropy floor h(y) = y·log y − c·y >= −exp(c−1):");
    for e in ents {
        println!(
            "  c = {:>3}: min margin on grid {:>10.3e}, defect at the minimizer {:.1e}",
            e.c, e.min_margin, e.equality_defect
        );
    }
    Ok(())
}
