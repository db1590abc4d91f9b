//! Totient moment sums and the auxiliary analytic quantities: the
//! ω(p)-weighted moment bound, elliptic totient moments, multiplicative-order
//! sums with their G(t) growth profile, S′ counts in progressions, and the
//! two elementary inequalities the moment chain leans on.
//!
//! Unspecified absolute constants are never asserted; every function emits
//! the observed ratio so regression tests can pin an envelope.

use crate::arith::factor::{euler_phi, Factorization};
use crate::arith::modular::multiplicative_order;
use crate::arith::poly::Polynomial;
use crate::arith::sieve::{PrimeSieve, SpfTable};
use crate::elliptic::CurveOrderTable;
use crate::error::{Error, Result};
use crate::sequences::in_primitive_two_squares;
use crate::util::KahanSum;

/// One totient moment sum with its bound decomposition.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentSumRecord {
    pub s: u32,
    /// Σ (a_n / φ(a_n))^s; always >= N.
    pub lhs: f64,
    pub n_values: u64,
    /// Σ_{p <= (log M)^α} ω(p)·(log p)^s / p.
    pub prime_sum: f64,
    /// lhs / (N + prime_sum).
    pub ratio: f64,
    /// ratio^(1/s): the per-power constant this sum exhibits.
    pub fitted_constant: f64,
}

/// Σ (a_n/φ(a_n))^s against N + Σ_p ω(p)(log p)^s/p, where ω(p) counts the
/// indices n with p | a_n. Values are sorted before accumulation, so the sum
/// is invariant under permutations of the input.
pub fn euler_lemma_ratio(
    values: &[u64],
    m_cap: u64,
    alpha: f64,
    s: u32,
    sieve: &PrimeSieve,
) -> Result<MomentSumRecord> {
    if values.is_empty() {
        return Err(Error::InvalidArgument("moment sum needs at least one value".into()));
    }
    if s < 1 {
        return Err(Error::InvalidArgument("moment exponent s must be >= 1".into()));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidArgument(format!("alpha must lie in (0,1), got {alpha}")));
    }
    for &v in values {
        if v < 1 || v > m_cap {
            return Err(Error::InvalidArgument(format!(
                "value {v} outside 1..={m_cap}"
            )));
        }
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable();

    let mut lhs = KahanSum::new();
    for &v in &sorted {
        let phi = crate::arith::euler_phi_u64(v, sieve)?;
        lhs.add((v as f64 / phi as f64).powi(s as i32));
    }

    let cutoff = (m_cap as f64).ln().powf(alpha);
    let mut prime_sum = KahanSum::new();
    if cutoff >= 2.0 {
        sieve.require(cutoff as u64)?;
        for p in sieve.primes() {
            if p as f64 > cutoff {
                break;
            }
            let omega = sorted.iter().filter(|&&v| v % p == 0).count() as u64;
            if omega > 0 {
                prime_sum.add(omega as f64 * (p as f64).ln().powi(s as i32) / p as f64);
            }
        }
    }

    let n = values.len() as u64;
    let ratio = lhs.value() / (n as f64 + prime_sum.value());
    Ok(MomentSumRecord {
        s,
        lhs: lhs.value(),
        n_values: n,
        prime_sum: prime_sum.value(),
        ratio,
        fitted_constant: ratio.powf(1.0 / s as f64),
    })
}

/// Σ_{3<=p<=x} (f(#E(F_p)) / φ(f(#E(F_p))))^s and the fitted constant
/// C(s, x) = (log(lhs/π(x)) − s·log s)/s from the exp(s·log s + C·s)·π(x)
/// bound shape.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EllipticMomentRecord {
    pub s: u32,
    pub lhs: f64,
    pub summands: u64,
    pub pi_x: u64,
    pub fitted_c: f64,
}

pub fn elliptic_totient_moment(
    f: &Polynomial,
    x: u64,
    s: u32,
    include_bad: bool,
    table: &CurveOrderTable,
    sieve: &PrimeSieve,
) -> Result<EllipticMomentRecord> {
    if x < 3 {
        return Err(Error::InvalidArgument(format!("need x >= 3, got {x}")));
    }
    if s < 1 {
        return Err(Error::InvalidArgument("moment exponent s must be >= 1".into()));
    }
    table.require(x)?;
    let mut lhs = KahanSum::new();
    let mut summands = 0u64;
    for &(p, order) in table.entries() {
        if p > x {
            break;
        }
        if !include_bad && table.is_bad(p) {
            continue;
        }
        let v = f.eval_nat(order)?;
        // f(#E) = 1 contributes a bare 1: φ(1) = 1.
        let phi = euler_phi(v, &Factorization::of(v, sieve)?)?;
        lhs.add((v as f64 / phi as f64).powi(s as i32));
        summands += 1;
    }
    let pi_x = sieve.prime_count(x)?;
    let s_f = s as f64;
    let fitted_c = ((lhs.value() / pi_x as f64).ln() - s_f * s_f.ln()) / s_f;
    Ok(EllipticMomentRecord { s, lhs: lhs.value(), summands, pi_x, fitted_c })
}

/// Partial sum Σ_{p <= x, (p,a)=1} log p / (p·h_a(p)^ε).
pub fn order_sum_partial(a: u64, epsilon: f64, x: u64, sieve: &PrimeSieve) -> Result<f64> {
    if a < 2 {
        return Err(Error::InvalidArgument(format!("base must be >= 2, got {a}")));
    }
    if epsilon <= 0.0 {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {epsilon}")));
    }
    if x < 3 {
        return Err(Error::InvalidArgument(format!("need x >= 3, got {x}")));
    }
    sieve.require(x)?;
    let mut acc = KahanSum::new();
    for p in sieve.primes_in(2, x) {
        if a.is_multiple_of(p) {
            continue;
        }
        let h = multiplicative_order(a, p, sieve)?;
        acc.add((p as f64).ln() / (p as f64 * (h as f64).powf(epsilon)));
    }
    Ok(acc.value())
}

/// G(t) = Σ_{p <= cap, (p,a)=1, h_a(p) <= t} log p / p at each requested t,
/// with the growth ratio G(t)/log t.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrderGrowth {
    pub t: u64,
    pub g: f64,
    pub ratio_to_log_t: f64,
}

pub fn order_growth_profile(
    a: u64,
    ts: &[u64],
    cap: u64,
    sieve: &PrimeSieve,
) -> Result<Vec<OrderGrowth>> {
    if a < 2 {
        return Err(Error::InvalidArgument(format!("base must be >= 2, got {a}")));
    }
    sieve.require(cap)?;
    // Orders once, then prefix sums in (h, p) order for a fixed
    // accumulation sequence shared by every t.
    let mut by_order: Vec<(u64, u64)> = Vec::new();
    for p in sieve.primes_in(2, cap) {
        if a.is_multiple_of(p) {
            continue;
        }
        by_order.push((multiplicative_order(a, p, sieve)?, p));
    }
    by_order.sort_unstable();
    let mut out = Vec::with_capacity(ts.len());
    for &t in ts {
        if t < 1 {
            return Err(Error::InvalidArgument("growth cutoff t must be >= 1".into()));
        }
        let mut g = KahanSum::new();
        for &(h, p) in by_order.iter().take_while(|&&(h, _)| h <= t) {
            let _ = h;
            g.add((p as f64).ln() / p as f64);
        }
        let ratio = if t >= 2 { g.value() / (t as f64).ln() } else { 0.0 };
        out.push(OrderGrowth { t, g: g.value(), ratio_to_log_t: ratio });
    }
    Ok(out)
}

/// #{n <= x : n ≡ l (mod k), n ∈ S′} with the bound ratio
/// count·k·√(log x) / (x·loglog(k+2)) and the Mertens-style product
/// ∏_{p|k, p≡3(4)} (1 + 1/p).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct S2sProgression {
    pub count: u64,
    pub bound_ratio: f64,
    pub mertens_product: f64,
    /// mertens_product / loglog(k+2).
    pub mertens_ratio: f64,
    /// k <= √x, the regime the progression bound is stated for. Counts are
    /// still computed outside it; the flag just marks the excursion.
    pub regime_ok: bool,
}

pub fn s2s_progression_ratio(x: u64, k: u64, l: i64, spf: &SpfTable) -> Result<S2sProgression> {
    if k < 1 {
        return Err(Error::InvalidArgument("progression modulus k must be >= 1".into()));
    }
    if x < 2 {
        return Err(Error::InvalidArgument(format!("need x >= 2, got {x}")));
    }
    spf.require(x)?;
    let residue = l.rem_euclid(k as i64) as u64;
    let mut count = 0u64;
    let mut n = if residue == 0 { k } else { residue };
    while n <= x {
        if in_primitive_two_squares(n, spf) {
            count += 1;
        }
        n += k;
    }

    let loglog = ((k + 2) as f64).ln().ln();
    let bound_ratio = count as f64 * k as f64 * (x as f64).ln().sqrt() / (x as f64 * loglog);

    let mut mertens = 1.0f64;
    let mut rem = k;
    let mut d = 2u64;
    while d * d <= rem {
        if rem.is_multiple_of(d) {
            if d % 4 == 3 {
                mertens *= 1.0 + 1.0 / d as f64;
            }
            while rem.is_multiple_of(d) {
                rem /= d;
            }
        }
        d += 1;
    }
    if rem > 1 && rem % 4 == 3 {
        mertens *= 1.0 + 1.0 / rem as f64;
    }

    Ok(S2sProgression {
        count,
        bound_ratio,
        mertens_product: mertens,
        mertens_ratio: mertens / loglog,
        regime_ok: (k as u128) * (k as u128) <= x as u128,
    })
}

/// Σ_{n<=cap} (log n)^s / n², compensated, ascending n.
pub fn log_power_sum(s: u32, cap: u64) -> f64 {
    let mut acc = KahanSum::new();
    for n in 1..=cap {
        let ln_n = (n as f64).ln();
        acc.add(ln_n.powi(s as i32) / (n as f64 * n as f64));
    }
    acc.value()
}

/// The factorial-tail bound 2·exp(s·log s) that dominates the log-power sum.
pub fn log_power_bound(s: u32) -> f64 {
    let s_f = s as f64;
    2.0 * (s_f * s_f.ln()).exp()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogPowerCheck {
    pub s: u32,
    pub sum: f64,
    pub bound: f64,
    pub ok: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyCheck {
    pub c: f64,
    /// min over the grid of h(y) − (−exp(c−1)) with h(y) = y·log y − c·y;
    /// nonnegative up to rounding at the minimizer.
    pub min_margin: f64,
    /// |h(exp(c−1)) + exp(c−1)| / exp(c−1): the relative defect at the
    /// exact minimizer.
    pub equality_defect: f64,
    pub ok: bool,
}

/// Relative slack granted at the minimizer, where the margin is exactly
/// zero in real arithmetic and only rounding noise survives in f64.
pub const ENTROPY_EQUALITY_RTOL: f64 = 1e-12;

/// Verify (i) Σ_{n<=cap} (log n)^s/n² <= 2·exp(s log s) for s = 1..=s_max and
/// (ii) y·log y − c·y >= −exp(c−1) on the grid, with equality at y = exp(c−1).
pub fn analytic_inequalities(
    s_max: u32,
    cap: u64,
    cs: &[f64],
    grid: &[f64],
) -> Result<(Vec<LogPowerCheck>, Vec<EntropyCheck>)> {
    if s_max < 1 {
        return Err(Error::InvalidArgument("need s_max >= 1".into()));
    }
    let mut sums = Vec::with_capacity(s_max as usize);
    for s in 1..=s_max {
        let sum = log_power_sum(s, cap);
        let bound = log_power_bound(s);
        sums.push(LogPowerCheck { s, sum, bound, ok: sum <= bound });
    }

    let mut entropies = Vec::with_capacity(cs.len());
    for &c in cs {
        if c <= 0.0 {
            return Err(Error::InvalidArgument(format!("c must be positive, got {c}")));
        }
        let floor = -(c - 1.0).exp();
        let h = |y: f64| y * y.ln() - c * y;
        let mut min_margin = f64::INFINITY;
        for &y in grid {
            if y <= 0.0 {
                return Err(Error::InvalidArgument(format!("grid values must be positive, got {y}")));
            }
            min_margin = min_margin.min(h(y) - floor);
        }
        let minimizer = (c - 1.0).exp();
        let equality_defect = (h(minimizer) - floor).abs() / minimizer;
        let ok = min_margin >= -ENTROPY_EQUALITY_RTOL * minimizer
            && equality_defect <= ENTROPY_EQUALITY_RTOL;
        entropies.push(EntropyCheck { c, min_margin, equality_defect, ok });
    }
    Ok((sums, entropies))
}

/// Log-spaced grid of `points` values spanning [lo, hi].
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && points >= 2);
    let step = (hi / lo).ln() / (points - 1) as f64;
    (0..points).map(|i| lo * (step * i as f64).exp()).collect()
}
