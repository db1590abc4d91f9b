//! Representation counts r(n) for a pair of sequences, the S1/S2/S3
//! second-moment decomposition, and threshold/density reports.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sequences::{SequenceSpec, Tables, TermMultiset};

/// r(n) = #{(i, j) : a_i + b_j = n} for every n <= x, with the enumerated
/// term multisets kept for the moment computations.
pub struct RepProfile {
    x: u64,
    counts: Vec<u32>,
    spec_a: SequenceSpec,
    spec_b: SequenceSpec,
    a_terms: TermMultiset,
    b_terms: TermMultiset,
}

/// Exact convolution: for each a_i <= x, each b_j <= x − a_i (with
/// multiplicity) increments r(a_i + b_j). Parallelized over blocks of
/// a-terms; the per-block partial arrays merge by integer addition, so the
/// result is identical for every worker count.
pub fn representation_counts(
    spec_a: &SequenceSpec,
    spec_b: &SequenceSpec,
    x: u64,
    tables: &Tables,
) -> Result<RepProfile> {
    let a_terms = spec_a.enumerate(x, tables)?;
    if a_terms.iter().any(|(_, m)| m > 1) {
        return Err(Error::InvalidArgument(
            "A-side sequence must be strictly increasing (no repeated terms)".into(),
        ));
    }
    let b_terms = spec_b.enumerate(x, tables)?;

    let a_values: Vec<u64> = a_terms.values().collect();
    let b_pairs: Vec<(u64, u32)> = b_terms.iter().collect();
    let len = x as usize + 1;

    let counts = a_values
        .par_chunks(4096)
        .map(|block| {
            let mut partial = vec![0u32; len];
            for &a in block {
                for &(b, m) in &b_pairs {
                    let Some(n) = a.checked_add(b) else { break };
                    if n > x {
                        break;
                    }
                    partial[n as usize] = partial[n as usize].saturating_add(m);
                }
            }
            partial
        })
        .reduce(
            || vec![0u32; len],
            |mut acc, partial| {
                for (a, p) in acc.iter_mut().zip(partial) {
                    *a = a.saturating_add(p);
                }
                acc
            },
        );
    if counts.contains(&u32::MAX) {
        return Err(Error::Overflow("representation count saturated 32 bits"));
    }

    Ok(RepProfile {
        x,
        counts,
        spec_a: spec_a.clone(),
        spec_b: spec_b.clone(),
        a_terms,
        b_terms,
    })
}

impl RepProfile {
    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn r(&self, n: u64) -> u32 {
        self.counts[n as usize]
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn spec_a(&self) -> &SequenceSpec {
        &self.spec_a
    }

    pub fn spec_b(&self) -> &SequenceSpec {
        &self.spec_b
    }

    pub fn a_terms(&self) -> &TermMultiset {
        &self.a_terms
    }

    pub fn b_terms(&self) -> &TermMultiset {
        &self.b_terms
    }

    pub fn sum_r(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }

    pub fn sum_r_sq(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128 * c as u128).sum()
    }

    /// Σ_{n<=x} r(n) = Σ_{a_i <= x} B(x − a_i): the double-counting identity.
    pub fn double_count_check(&self) -> bool {
        let by_a: u64 = self
            .a_terms
            .values()
            .map(|a| self.b_terms.count_le(self.x - a))
            .sum();
        by_a == self.sum_r()
    }
}

/// The diagonal and off-diagonal pieces of Σ r(n)².
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MomentReport {
    /// Equal-index diagonal Σ_i Σ_{j: b_j <= x−a_i} ord(b_j).
    pub s1: u64,
    /// Collisions with i1 < i2.
    pub s2: u64,
    /// Collisions with i1 > i2; always equals s2.
    pub s3: u64,
    pub sum_r: u64,
    pub sum_r2: u128,
}

/// Compute S1 directly, S2 and S3 by two independent collision scans, and
/// verify Σ r(n)² = S1 + 2·S2 exactly. A mismatch is a bug, not bad input.
pub fn moment_decomposition(profile: &RepProfile) -> Result<MomentReport> {
    let x = profile.x;
    let b = &profile.b_terms;

    // S1: for each a, every b-index pair (j, k) with b_j = b_k <= x − a;
    // grouping by value v gives Σ mult(v)² over v <= x − a.
    let b_vals: Vec<(u64, u64)> = b.iter().map(|(v, m)| (v, m as u64)).collect();
    let mut prefix_sq: Vec<u128> = Vec::with_capacity(b_vals.len() + 1);
    prefix_sq.push(0);
    for &(_, m) in &b_vals {
        let last = *prefix_sq.last().unwrap();
        prefix_sq.push(last + (m as u128) * (m as u128));
    }
    let mut s1: u128 = 0;
    for a in profile.a_terms.values() {
        let budget = x - a; // a <= x by construction
        let idx = b_vals.partition_point(|&(v, _)| v <= budget);
        s1 += prefix_sq[idx];
    }

    let a_set: HashSet<u64> = profile.a_terms.values().collect();
    let a_values: Vec<u64> = profile.a_terms.values().collect();

    // S2: i1 < i2 forces b_{j1} > b_{j2}; anchor on the smaller a and the
    // larger b-value: a + v_hi <= x and a + (v_hi − v_lo) ∈ A.
    let mut s2: u128 = 0;
    for (hi_idx, &(v_hi, m_hi)) in b_vals.iter().enumerate() {
        if v_hi > x {
            break;
        }
        let a_cap = x - v_hi;
        for &(v_lo, m_lo) in &b_vals[..hi_idx] {
            let d = v_hi - v_lo;
            let mut matches = 0u64;
            for &a in &a_values {
                if a > a_cap {
                    break;
                }
                if a_set.contains(&(a + d)) {
                    matches += 1;
                }
            }
            s2 += (m_hi as u128) * (m_lo as u128) * matches as u128;
        }
    }

    // S3: i1 > i2 forces b_{j1} < b_{j2}; anchor on the larger a and walk
    // downward: a + v_lo <= x with a − (v_hi − v_lo) ∈ A.
    let mut s3: u128 = 0;
    for (hi_idx, &(v_hi, m_hi)) in b_vals.iter().enumerate() {
        if v_hi > x {
            break;
        }
        for &(v_lo, m_lo) in &b_vals[..hi_idx] {
            let d = v_hi - v_lo;
            let mut matches = 0u64;
            for &a in a_values.iter().rev() {
                if a + v_lo > x {
                    continue;
                }
                if a > d && a_set.contains(&(a - d)) && a - d + v_hi <= x {
                    matches += 1;
                }
            }
            s3 += (m_hi as u128) * (m_lo as u128) * matches as u128;
        }
    }

    let sum_r2 = profile.sum_r_sq();
    if s2 != s3 {
        return Err(Error::Inconsistency(format!("S2 = {s2} differs from S3 = {s3}")));
    }
    if sum_r2 != s1 + 2 * s2 {
        return Err(Error::Inconsistency(format!(
            "moment identity failed: sum r² = {sum_r2}, S1 + 2·S2 = {}",
            s1 + 2 * s2
        )));
    }
    Ok(MomentReport {
        s1: u64::try_from(s1).map_err(|_| Error::Overflow("S1"))?,
        s2: u64::try_from(s2).map_err(|_| Error::Overflow("S2"))?,
        s3: u64::try_from(s3).map_err(|_| Error::Overflow("S3"))?,
        sum_r: profile.sum_r(),
        sum_r2,
    })
}

/// The upper surrogate Σ_{b_j < b_k <= x} A(x, b_k − b_j) that dominates S2
/// in the second-moment argument. Quadratic in B(x)·A(x): intended for
/// small cutoffs.
pub fn s2_shift_surrogate(profile: &RepProfile, tables: &Tables) -> Result<u128> {
    let x = profile.x;
    let b_vals: Vec<(u64, u64)> = profile.b_terms.iter().map(|(v, m)| (v, m as u64)).collect();
    let mut total: u128 = 0;
    for (hi_idx, &(v_hi, m_hi)) in b_vals.iter().enumerate() {
        for &(v_lo, m_lo) in &b_vals[..hi_idx] {
            let shifted = profile.spec_a.count_shifted(x, v_hi - v_lo, tables)?;
            total += m_hi as u128 * m_lo as u128 * shifted as u128;
        }
    }
    Ok(total)
}

/// Threshold/density report: how many n <= x carry at least c1·B(x)/η(x)
/// representations, against the theorem's lower-bound shape
/// x·B(x)/(B(x) + ρ·η(x)).
#[derive(Clone, Debug, PartialEq)]
pub struct DensityReport {
    pub c1: f64,
    pub b_count: u64,
    pub rho: u32,
    pub eta: f64,
    pub threshold: f64,
    pub count_above: u64,
    pub lower_bound_shape: f64,
    /// count_above / lower_bound_shape: the empirical c2.
    pub empirical_c2: f64,
    /// (Σ_{n∈T} r(n))² <= |T|·Σ r(n)² over the thresholded set T.
    pub cauchy_ok: bool,
}

pub fn density_report(profile: &RepProfile, c1: f64) -> Result<DensityReport> {
    if c1 <= 0.0 {
        return Err(Error::InvalidArgument(format!("c1 must be positive, got {c1}")));
    }
    let eta = profile
        .spec_a
        .eta()
        .ok_or_else(|| Error::InvalidArgument("A-side spec carries no eta normalizer".into()))?
        .eval(profile.x as f64);
    let b_count = profile.b_terms.count();
    if b_count == 0 {
        return Err(Error::InvalidArgument("B(x) = 0; density report undefined".into()));
    }
    let rho = profile.b_terms.max_multiplicity();

    let threshold = c1 * b_count as f64 / eta;
    let mut count_above = 0u64;
    let mut sum_above: u128 = 0;
    for &c in &profile.counts {
        if c as f64 >= threshold {
            count_above += 1;
            sum_above += c as u128;
        }
    }
    // Cauchy–Schwarz on the thresholded set, checked in exact integers.
    let lhs = sum_above * sum_above;
    let rhs = count_above as u128 * profile.sum_r_sq();
    if lhs > rhs {
        return Err(Error::Inconsistency(format!(
            "Cauchy-Schwarz violated: {lhs} > {rhs}"
        )));
    }

    let x = profile.x as f64;
    let lower_bound_shape = x * b_count as f64 / (b_count as f64 + rho as f64 * eta);
    Ok(DensityReport {
        c1,
        b_count,
        rho,
        eta,
        threshold,
        count_above,
        lower_bound_shape,
        empirical_c2: count_above as f64 / lower_bound_shape,
        cauchy_ok: lhs <= rhs,
    })
}

/// Shifted-count envelope sup_r A(x,r)·φ(r)·η(x)² / (r·x) for the A-side
/// hypotheses; reports the grid and the attaining shift.
#[derive(Clone, Debug, PartialEq)]
pub struct ShiftedBound {
    pub sup_ratio: f64,
    pub arg_r: u64,
    /// (r, A(x, r), ratio) for every shift on the grid.
    pub grid: Vec<(u64, u64, f64)>,
}

pub fn shifted_bound_ratio(
    spec_a: &SequenceSpec,
    x: u64,
    r_max: u64,
    tables: &Tables,
) -> Result<ShiftedBound> {
    if !matches!(spec_a.kind_name(), "primes" | "primitive-two-squares") {
        return Err(Error::InvalidArgument(
            "shifted-bound ratios are defined for the primes and S' families".into(),
        ));
    }
    if r_max < 1 || r_max > x {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= r_max <= x, got r_max = {r_max}, x = {x}"
        )));
    }
    let upper = spec_a.enumerate(x + r_max, tables)?;
    // Dense membership for O(1) shifted lookups.
    let mut member = vec![false; (x + r_max + 1) as usize];
    for v in upper.values() {
        member[v as usize] = true;
    }
    let eta_sq = spec_a.eta().unwrap().eval(x as f64).powi(2);

    let mut grid = Vec::with_capacity(r_max as usize);
    let (mut sup_ratio, mut arg_r) = (f64::MIN, 1u64);
    for r in 1..=r_max {
        let count = upper
            .values()
            .take_while(|&v| v <= x)
            .filter(|&v| member[(v + r) as usize])
            .count() as u64;
        let phi_r = crate::arith::euler_phi_u64(r, &tables.sieve)?;
        let ratio = count as f64 * phi_r as f64 * eta_sq / (r as f64 * x as f64);
        if ratio > sup_ratio {
            sup_ratio = ratio;
            arg_r = r;
        }
        grid.push((r, count, ratio));
    }
    Ok(ShiftedBound { sup_ratio, arg_r, grid })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Polynomial;

    fn tables(limit: u64) -> Tables {
        Tables::new(limit, limit).unwrap()
    }

    fn classical_pair() -> (SequenceSpec, SequenceSpec) {
        (
            SequenceSpec::primes(),
            SequenceSpec::power_poly(2, Polynomial::identity()).unwrap(),
        )
    }

    /// Oracle: brute-force double loop over index-expanded term lists.
    fn brute_force_r(a: &TermMultiset, b: &TermMultiset, x: u64) -> Vec<u32> {
        let mut r = vec![0u32; x as usize + 1];
        for (av, am) in a.iter() {
            for (bv, bm) in b.iter() {
                let n = av + bv;
                if n <= x {
                    r[n as usize] += am * bm;
                }
            }
        }
        r
    }

    #[test]
    fn classical_profile_small_values() {
        let t = tables(100);
        let (pa, pb) = classical_pair();
        let profile = representation_counts(&pa, &pb, 20, &t).unwrap();
        // Minimum sum is 2 + 2 = 4.
        for n in 0..4 {
            assert_eq!(profile.r(n), 0);
        }
        // r(9) = 2: 7+2 and 5+4.
        assert_eq!(profile.r(9), 2);
        assert!(profile.double_count_check());
    }

    #[test]
    fn profile_matches_brute_force() {
        let t = tables(2_000);
        let (pa, pb) = classical_pair();
        let x = 2_000;
        let profile = representation_counts(&pa, &pb, x, &t).unwrap();
        let oracle = brute_force_r(profile.a_terms(), profile.b_terms(), x);
        assert_eq!(profile.counts(), &oracle[..]);
    }

    #[test]
    fn rejects_multiset_a_side() {
        let t = tables(1_000);
        // f(n) = (n-5)²+1 repeats values at prime arguments 3 and 7.
        let repeating = SequenceSpec::poly_of_primes(
            Polynomial::new(vec![26, -10, 1]).unwrap(),
        )
        .unwrap();
        let b = SequenceSpec::power_poly(2, Polynomial::identity()).unwrap();
        assert!(representation_counts(&repeating, &b, 100, &t).is_err());
    }

    #[test]
    fn moment_identity_and_quadruple_oracle() {
        let t = tables(1_000);
        let (pa, pb) = classical_pair();
        let x = 100;
        let profile = representation_counts(&pa, &pb, x, &t).unwrap();
        let report = moment_decomposition(&profile).unwrap();

        // Exhaustive quadruple loop over index-expanded term lists.
        let expand = |ms: &TermMultiset| -> Vec<u64> {
            let mut out = Vec::new();
            for (v, m) in ms.iter() {
                for _ in 0..m {
                    out.push(v);
                }
            }
            out
        };
        let a = expand(profile.a_terms());
        let b = expand(profile.b_terms());
        let (mut s1, mut s2, mut s3) = (0u64, 0u64, 0u64);
        for (i1, &a1) in a.iter().enumerate() {
            for (i2, &a2) in a.iter().enumerate() {
                for &b1 in &b {
                    if a1 + b1 > x {
                        continue;
                    }
                    for &b2 in &b {
                        if a1 + b1 == a2 + b2 {
                            match i1.cmp(&i2) {
                                std::cmp::Ordering::Equal => s1 += 1,
                                std::cmp::Ordering::Less => s2 += 1,
                                std::cmp::Ordering::Greater => s3 += 1,
                            }
                        }
                    }
                }
            }
        }
        assert_eq!((report.s1, report.s2, report.s3), (s1, s2, s3));
        assert_eq!(report.sum_r2, report.s1 as u128 + 2 * report.s2 as u128);
    }

    #[test]
    fn distinct_b_terms_make_s1_the_plain_sum() {
        let t = tables(500);
        let (pa, pb) = classical_pair();
        let profile = representation_counts(&pa, &pb, 500, &t).unwrap();
        // Powers of two are distinct, so ord ≡ 1 and S1 = Σ r(n).
        let report = moment_decomposition(&profile).unwrap();
        assert_eq!(report.s1, report.sum_r);
    }

    #[test]
    fn s2_below_shift_surrogate() {
        let t = tables(1_000);
        let (pa, pb) = classical_pair();
        for x in [50u64, 200, 500] {
            let profile = representation_counts(&pa, &pb, x, &t).unwrap();
            let report = moment_decomposition(&profile).unwrap();
            let surrogate = s2_shift_surrogate(&profile, &t).unwrap();
            assert!(
                (report.s2 as u128) <= surrogate,
                "x = {x}: S2 = {} > surrogate {surrogate}",
                report.s2
            );
        }
    }

    #[test]
    fn sum_r_lower_bound_step() {
        let t = tables(2_000);
        let (pa, pb) = classical_pair();
        let x = 2_000u64;
        let profile = representation_counts(&pa, &pb, x, &t).unwrap();
        let half = x / 2;
        let a_half = profile.a_terms().count_le(half);
        let b_half = profile.b_terms().count_le(half);
        assert!(profile.sum_r() >= a_half * b_half);
    }

    #[test]
    fn density_report_thresholds() {
        let t = tables(2_000);
        let (pa, pb) = classical_pair();
        let profile = representation_counts(&pa, &pb, 2_000, &t).unwrap();

        // A positive threshold <= 1 counts exactly the support of r.
        let tiny = density_report(&profile, 1e-9).unwrap();
        let support = profile.counts().iter().filter(|&&c| c >= 1).count() as u64;
        assert!(tiny.threshold > 0.0 && tiny.threshold <= 1.0);
        assert_eq!(tiny.count_above, support);

        // Monotone: count_above never grows as c1 grows.
        let mut last = u64::MAX;
        for c1 in [0.015625, 0.0625, 0.25, 1.0, 4.0] {
            let rep = density_report(&profile, c1).unwrap();
            assert!(rep.count_above <= last);
            assert!(rep.cauchy_ok);
            last = rep.count_above;
        }
    }

    #[test]
    fn shifted_bound_parity_example() {
        let t = tables(11_000);
        let primes = SequenceSpec::primes();
        let x = 10_000;
        let res = shifted_bound_ratio(&primes, x, 10, &t).unwrap();
        // Odd shifts hit the parity obstruction: only 2 + odd can be prime.
        for &(r, count, _) in &res.grid {
            if r % 2 == 1 {
                assert!(count <= 1, "A({x}, {r}) = {count}");
            }
        }
        // r = 2 counts twin pairs; cross-check by direct enumeration.
        let twins = t
            .sieve
            .primes_in(2, x)
            .filter(|&p| t.sieve.is_prime(p + 2))
            .count() as u64;
        assert_eq!(res.grid[1].1, twins);
    }

    #[test]
    fn shifted_bound_rejects_other_families() {
        let t = tables(100);
        let b = SequenceSpec::power_poly(2, Polynomial::identity()).unwrap();
        assert!(shifted_bound_ratio(&b, 50, 5, &t).is_err());
        assert!(shifted_bound_ratio(&SequenceSpec::primes(), 50, 51, &t).is_err());
    }
}
