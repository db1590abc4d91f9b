//! Declarative specifications for the nine term sequences, with enumeration,
//! counting C(x), shifted counting C(x, r), multiplicity queries ord/ρ, and
//! the congruence profile λ.
//!
//! Sequences are index multisets: C(x) and λ count indices, membership tests
//! count values. Power sequences a^{f(m)} are handled in the exponent domain
//! throughout — the cutoff comparison is f(m) <= floor(log_a x) in exact
//! integers and congruences reduce exponents modulo h_a(p).

use crate::arith::modular::{is_prime_u64, mod_pow, multiplicative_order};
use crate::arith::poly::Polynomial;
use crate::arith::sieve::{PrimeSieve, SpfTable};
use crate::elliptic::{CurveOrderTable, CurveParams};
use crate::error::{Error, Result};
use crate::util::KahanSum;

/// Shared lookup tables an enumeration may need. Construction is explicit so
/// experiments can size them once; everything here is immutable afterwards.
pub struct Tables {
    pub sieve: PrimeSieve,
    pub spf: SpfTable,
    pub curve_orders: Option<CurveOrderTable>,
}

impl Tables {
    pub fn new(sieve_limit: u64, spf_limit: u64) -> Result<Self> {
        Ok(Tables {
            sieve: PrimeSieve::new(sieve_limit.max(2))?,
            spf: SpfTable::new(spf_limit.max(2))?,
            curve_orders: None,
        })
    }

    pub fn with_curve_orders(mut self, table: CurveOrderTable) -> Self {
        self.curve_orders = Some(table);
        self
    }

    fn curve_table(&self, curve: &CurveParams) -> Result<&CurveOrderTable> {
        match &self.curve_orders {
            Some(t) if t.curve().a() == curve.a() && t.curve().b() == curve.b() => Ok(t),
            Some(t) => Err(Error::InvalidArgument(format!(
                "order table holds curve {}, spec needs {}",
                t.curve(),
                curve
            ))),
            None => Err(Error::InvalidArgument(
                "spec needs a curve order table, none was built".into(),
            )),
        }
    }
}

/// n ∈ S: every prime ≡ 3 (mod 4) in the factorization has even exponent.
pub fn in_sums_two_squares(n: u64, spf: &SpfTable) -> bool {
    assert!(n >= 1);
    let mut rem = n;
    while rem > 1 {
        let p = spf.smallest_factor(rem);
        let mut e = 0u32;
        while rem.is_multiple_of(p) {
            rem /= p;
            e += 1;
        }
        if p % 4 == 3 && e % 2 == 1 {
            return false;
        }
    }
    true
}

/// n ∈ S′: n odd and composed only of primes ≡ 1 (mod 4); 1 qualifies as the
/// empty product.
pub fn in_primitive_two_squares(n: u64, spf: &SpfTable) -> bool {
    assert!(n >= 1);
    if n.is_multiple_of(2) {
        return false;
    }
    let mut rem = n;
    while rem > 1 {
        let p = spf.smallest_factor(rem);
        if p % 4 != 1 {
            return false;
        }
        rem /= p;
    }
    true
}

/// Density normalizer η(x) carried by A-side sequences, so that
/// A(x) ≍ x/η(x). Attached at construction; reports cannot mispair it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Eta {
    Log,
    SqrtLog,
}

impl Eta {
    pub fn eval(self, x: f64) -> f64 {
        match self {
            Eta::Log => x.ln(),
            Eta::SqrtLog => x.ln().sqrt(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Kind {
    Primes,
    SumsTwoSquares,
    PrimitiveTwoSquares,
    PowerPoly { base: u64, f: Polynomial },
    PolyOfPrimes { f: Polynomial },
    PolyOfSPrime { f: Polynomial },
    PowerPolyOfPrimes { base: u64, f: Polynomial },
    PowerPolyOfSPrime { base: u64, f: Polynomial },
    PolyOfCurveOrders { curve: CurveParams, f: Polynomial, include_bad: bool },
}

/// One of the nine sequence families. Constructors enforce the family's
/// hypotheses (base >= 2, degree >= 1, unit content for power families).
#[derive(Clone, Debug, PartialEq)]
pub struct SequenceSpec {
    kind: Kind,
    eta: Option<Eta>,
}

fn check_poly(f: &Polynomial) -> Result<()> {
    if f.degree() == 0 {
        return Err(Error::InvalidArgument("sequence polynomial must be nonconstant".into()));
    }
    Ok(())
}

fn check_power(base: u64, f: &Polynomial) -> Result<()> {
    if base < 2 {
        return Err(Error::InvalidArgument(format!("power base must be >= 2, got {base}")));
    }
    check_poly(f)?;
    if !f.has_unit_content() {
        return Err(Error::InvalidArgument(format!(
            "power-sequence polynomial must have unit content, gcd = {}",
            f.content()
        )));
    }
    Ok(())
}

impl SequenceSpec {
    pub fn primes() -> Self {
        SequenceSpec { kind: Kind::Primes, eta: Some(Eta::Log) }
    }

    pub fn sums_two_squares() -> Self {
        SequenceSpec { kind: Kind::SumsTwoSquares, eta: Some(Eta::SqrtLog) }
    }

    pub fn primitive_two_squares() -> Self {
        SequenceSpec { kind: Kind::PrimitiveTwoSquares, eta: Some(Eta::SqrtLog) }
    }

    /// {a^{f(m)} : m >= 1}.
    pub fn power_poly(base: u64, f: Polynomial) -> Result<Self> {
        check_power(base, &f)?;
        Ok(SequenceSpec { kind: Kind::PowerPoly { base, f }, eta: None })
    }

    /// {f(p) : p prime}.
    pub fn poly_of_primes(f: Polynomial) -> Result<Self> {
        check_poly(&f)?;
        Ok(SequenceSpec { kind: Kind::PolyOfPrimes { f }, eta: None })
    }

    /// {f(s) : s ∈ S′}.
    pub fn poly_of_s_prime(f: Polynomial) -> Result<Self> {
        check_poly(&f)?;
        Ok(SequenceSpec { kind: Kind::PolyOfSPrime { f }, eta: None })
    }

    /// {a^{f(p)} : p prime}.
    pub fn power_poly_of_primes(base: u64, f: Polynomial) -> Result<Self> {
        check_power(base, &f)?;
        Ok(SequenceSpec { kind: Kind::PowerPolyOfPrimes { base, f }, eta: None })
    }

    /// {a^{f(s)} : s ∈ S′}.
    pub fn power_poly_of_s_prime(base: u64, f: Polynomial) -> Result<Self> {
        check_power(base, &f)?;
        Ok(SequenceSpec { kind: Kind::PowerPolyOfSPrime { base, f }, eta: None })
    }

    /// {f(#E(F_p)) : p >= 3}. Bad-reduction primes take their literal order;
    /// `include_bad` controls whether those indices enter the sequence.
    pub fn poly_of_curve_orders(curve: CurveParams, f: Polynomial, include_bad: bool) -> Result<Self> {
        check_poly(&f)?;
        Ok(SequenceSpec {
            kind: Kind::PolyOfCurveOrders { curve, f, include_bad },
            eta: None,
        })
    }

    pub fn eta(&self) -> Option<Eta> {
        self.eta
    }

    /// The prime-cutoff exponent α used by the congruence-sum hypothesis for
    /// this family: 1/(2d) for a^{f(m)}, 1/2 for f(p) and f(s), 1/(3d) for
    /// a^{f(p)} and a^{f(s)}, 1/15 for curve orders.
    pub fn lemma_alpha(&self) -> Option<f64> {
        match &self.kind {
            Kind::PowerPoly { f, .. } => Some(1.0 / (2.0 * f.degree() as f64)),
            Kind::PolyOfPrimes { .. } | Kind::PolyOfSPrime { .. } => Some(0.5),
            Kind::PowerPolyOfPrimes { f, .. } | Kind::PowerPolyOfSPrime { f, .. } => {
                Some(1.0 / (3.0 * f.degree() as f64))
            }
            Kind::PolyOfCurveOrders { .. } => Some(1.0 / 15.0),
            _ => None,
        }
    }

    /// Degree of the defining polynomial, when there is one.
    pub fn poly_degree(&self) -> Option<usize> {
        match &self.kind {
            Kind::PowerPoly { f, .. }
            | Kind::PolyOfPrimes { f }
            | Kind::PolyOfSPrime { f }
            | Kind::PowerPolyOfPrimes { f, .. }
            | Kind::PowerPolyOfSPrime { f, .. }
            | Kind::PolyOfCurveOrders { f, .. } => Some(f.degree()),
            _ => None,
        }
    }

    /// Table coverage needed to enumerate this sequence up to `x`. Used by
    /// the experiment runner to size [`Tables`] once, up front.
    pub fn table_requirements(&self, x: u64) -> TableNeeds {
        // Factoring p−1 inside order computations wants √x headroom.
        let base_sieve = 64u64.max(crate::arith::isqrt(x) + 2);
        match &self.kind {
            Kind::Primes => TableNeeds { sieve: x.max(base_sieve), spf: 2, curve: None },
            Kind::SumsTwoSquares | Kind::PrimitiveTwoSquares => {
                TableNeeds { sieve: base_sieve, spf: x, curve: None }
            }
            Kind::PowerPoly { .. } => TableNeeds { sieve: base_sieve, spf: 2, curve: None },
            Kind::PolyOfPrimes { f } => {
                TableNeeds { sieve: f.tail_bound(x).max(base_sieve), spf: 2, curve: None }
            }
            Kind::PolyOfSPrime { f } => {
                TableNeeds { sieve: base_sieve, spf: f.tail_bound(x).max(2), curve: None }
            }
            Kind::PowerPolyOfPrimes { base, f } => {
                let stop = f.tail_bound(ilog_floor(*base, x));
                TableNeeds { sieve: stop.max(base_sieve), spf: 2, curve: None }
            }
            Kind::PowerPolyOfSPrime { base, f } => {
                let stop = f.tail_bound(ilog_floor(*base, x));
                TableNeeds { sieve: base_sieve, spf: stop.max(2), curve: None }
            }
            Kind::PolyOfCurveOrders { curve, f, include_bad } => {
                let n_cap = f.tail_bound(x);
                let mut limit = n_cap + 2 * crate::arith::isqrt(n_cap) + 2;
                if *include_bad {
                    limit = limit.max(curve.bad_primes().last().copied().unwrap_or(0));
                }
                TableNeeds {
                    sieve: limit.max(base_sieve),
                    spf: 2,
                    curve: Some((curve.clone(), limit)),
                }
            }
        }
    }

    /// The kind token used by the plain-text record form.
    pub fn kind_name(&self) -> &'static str {
        match &self.kind {
            Kind::Primes => "primes",
            Kind::SumsTwoSquares => "two-squares",
            Kind::PrimitiveTwoSquares => "primitive-two-squares",
            Kind::PowerPoly { .. } => "power-poly",
            Kind::PolyOfPrimes { .. } => "poly-primes",
            Kind::PolyOfSPrime { .. } => "poly-primitive-two-squares",
            Kind::PowerPolyOfPrimes { .. } => "power-poly-primes",
            Kind::PowerPolyOfSPrime { .. } => "power-poly-primitive-two-squares",
            Kind::PolyOfCurveOrders { .. } => "poly-curve-orders",
        }
    }

    fn is_power_kind(&self) -> bool {
        matches!(
            self.kind,
            Kind::PowerPoly { .. } | Kind::PowerPolyOfPrimes { .. } | Kind::PowerPolyOfSPrime { .. }
        )
    }

    fn power_base(&self) -> Option<u64> {
        match self.kind {
            Kind::PowerPoly { base, .. }
            | Kind::PowerPolyOfPrimes { base, .. }
            | Kind::PowerPolyOfSPrime { base, .. } => Some(base),
            _ => None,
        }
    }
}

/// Sorted (value, multiplicity) pairs of every term not exceeding the cutoff.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermMultiset {
    terms: Vec<(u64, u32)>,
}

impl TermMultiset {
    fn from_values(mut values: Vec<u64>) -> Result<Self> {
        values.sort_unstable();
        let mut terms: Vec<(u64, u32)> = Vec::new();
        for v in values {
            match terms.last_mut() {
                Some((last, m)) if *last == v => {
                    *m = m.checked_add(1).ok_or(Error::Overflow("term multiplicity"))?;
                }
                _ => terms.push((v, 1)),
            }
        }
        Ok(TermMultiset { terms })
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        self.terms.iter().copied()
    }

    pub fn values(&self) -> impl Iterator<Item = u64> + '_ {
        self.terms.iter().map(|&(v, _)| v)
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_value(&self) -> Option<u64> {
        self.terms.first().map(|&(v, _)| v)
    }

    /// C(x) at the multiset's own cutoff: the total index count.
    pub fn count(&self) -> u64 {
        self.terms.iter().map(|&(_, m)| m as u64).sum()
    }

    /// Index count among values <= y.
    pub fn count_le(&self, y: u64) -> u64 {
        let end = self.terms.partition_point(|&(v, _)| v <= y);
        self.terms[..end].iter().map(|&(_, m)| m as u64).sum()
    }

    pub fn contains(&self, v: u64) -> bool {
        self.terms.binary_search_by_key(&v, |&(t, _)| t).is_ok()
    }

    /// ord(v): the multiplicity of the value v.
    pub fn ord(&self, v: u64) -> u32 {
        self.terms
            .binary_search_by_key(&v, |&(t, _)| t)
            .map(|i| self.terms[i].1)
            .unwrap_or(0)
    }

    /// ρ: the maximum multiplicity present.
    pub fn max_multiplicity(&self) -> u32 {
        self.terms.iter().map(|&(_, m)| m).max().unwrap_or(0)
    }
}

/// Largest e >= 0 with base^e <= x, by repeated multiplication.
fn ilog_floor(base: u64, x: u64) -> u64 {
    debug_assert!(base >= 2);
    let mut e = 0u64;
    let mut acc: u128 = 1;
    while acc * base as u128 <= x as u128 {
        acc *= base as u128;
        e += 1;
    }
    e
}

/// Exponent multiset {f(m) : m >= 1, f(m) <= exponent_cutoff} with exact
/// multiplicities — the exponent-domain view of {a^{f(m)}}. ρ of this multiset
/// equals ρ of the value sequence and is checked against the degree bound.
pub fn power_exponent_profile(f: &Polynomial, exponent_cutoff: u64) -> Result<TermMultiset> {
    check_poly(f)?;
    let stop = f.tail_bound(exponent_cutoff);
    let mut exps = Vec::new();
    let mut m = 1u64;
    while m < stop {
        let v = f.eval_nat(m)?;
        if v <= exponent_cutoff {
            exps.push(v);
        }
        m += 1;
    }
    let profile = TermMultiset::from_values(exps)?;
    check_rho_degree(&profile, f)?;
    Ok(profile)
}

/// ρ <= d for every polynomial-image family: f(x) = c has at most d roots.
fn check_rho_degree(profile: &TermMultiset, f: &Polynomial) -> Result<()> {
    let rho = profile.max_multiplicity();
    if rho as usize > f.degree() {
        return Err(Error::Inconsistency(format!(
            "multiplicity {rho} exceeds polynomial degree {}",
            f.degree()
        )));
    }
    Ok(())
}

impl SequenceSpec {
    /// Every term <= x with its exact multiplicity.
    pub fn enumerate(&self, x: u64, tables: &Tables) -> Result<TermMultiset> {
        if x < 1 {
            return Err(Error::InvalidArgument("cutoff x must be >= 1".into()));
        }
        match &self.kind {
            Kind::Primes => {
                tables.sieve.require(x)?;
                TermMultiset::from_values(tables.sieve.primes_in(2, x).collect())
            }
            Kind::SumsTwoSquares => {
                tables.spf.require(x)?;
                TermMultiset::from_values(
                    (1..=x).filter(|&n| in_sums_two_squares(n, &tables.spf)).collect(),
                )
            }
            Kind::PrimitiveTwoSquares => {
                tables.spf.require(x)?;
                TermMultiset::from_values(
                    (1..=x).filter(|&n| in_primitive_two_squares(n, &tables.spf)).collect(),
                )
            }
            Kind::PowerPoly { base, f } => {
                let exps = power_exponent_profile(f, ilog_floor(*base, x))?;
                let terms = exps
                    .iter()
                    .map(|(e, m)| (pow_u64(*base, e), m))
                    .collect::<Vec<_>>();
                Ok(TermMultiset { terms })
            }
            Kind::PolyOfPrimes { f } => {
                let stop = f.tail_bound(x);
                tables.sieve.require(stop.saturating_sub(1).max(2))?;
                let mut values = Vec::new();
                for p in tables.sieve.primes() {
                    if p >= stop {
                        break;
                    }
                    let v = f.eval_nat(p)?;
                    if v <= x {
                        values.push(v);
                    }
                }
                let profile = TermMultiset::from_values(values)?;
                check_rho_degree(&profile, f)?;
                Ok(profile)
            }
            Kind::PolyOfSPrime { f } => {
                let stop = f.tail_bound(x);
                tables.spf.require(stop.saturating_sub(1).max(2))?;
                let mut values = Vec::new();
                for s in 1..stop {
                    if in_primitive_two_squares(s, &tables.spf) {
                        let v = f.eval_nat(s)?;
                        if v <= x {
                            values.push(v);
                        }
                    }
                }
                let profile = TermMultiset::from_values(values)?;
                check_rho_degree(&profile, f)?;
                Ok(profile)
            }
            Kind::PowerPolyOfPrimes { base, f } => {
                let emax = ilog_floor(*base, x);
                let stop = f.tail_bound(emax);
                tables.sieve.require(stop.saturating_sub(1).max(2))?;
                let mut exps = Vec::new();
                for p in tables.sieve.primes() {
                    if p >= stop {
                        break;
                    }
                    let v = f.eval_nat(p)?;
                    if v <= emax {
                        exps.push(v);
                    }
                }
                let profile = TermMultiset::from_values(exps)?;
                check_rho_degree(&profile, f)?;
                let terms = profile
                    .iter()
                    .map(|(e, m)| (pow_u64(*base, e), m))
                    .collect::<Vec<_>>();
                Ok(TermMultiset { terms })
            }
            Kind::PowerPolyOfSPrime { base, f } => {
                let emax = ilog_floor(*base, x);
                let stop = f.tail_bound(emax);
                tables.spf.require(stop.saturating_sub(1).max(2))?;
                let mut exps = Vec::new();
                for s in 1..stop {
                    if in_primitive_two_squares(s, &tables.spf) {
                        let v = f.eval_nat(s)?;
                        if v <= emax {
                            exps.push(v);
                        }
                    }
                }
                let profile = TermMultiset::from_values(exps)?;
                check_rho_degree(&profile, f)?;
                let terms = profile
                    .iter()
                    .map(|(e, m)| (pow_u64(*base, e), m))
                    .collect::<Vec<_>>();
                Ok(TermMultiset { terms })
            }
            Kind::PolyOfCurveOrders { curve, f, include_bad } => {
                let table = tables.curve_table(curve)?;
                // f(N) <= x forces N < tail_bound; Hasse then caps the prime.
                let n_cap = f.tail_bound(x);
                let mut needed = n_cap + 2 * crate::arith::isqrt(n_cap) + 2;
                if *include_bad {
                    needed = needed.max(curve.bad_primes().last().copied().unwrap_or(0));
                }
                table.require(needed)?;
                let mut values = Vec::new();
                for &(p, order) in table.entries() {
                    if !*include_bad && table.is_bad(p) {
                        continue;
                    }
                    let v = f.eval_nat(order)?;
                    if v <= x {
                        values.push(v);
                    }
                }
                TermMultiset::from_values(values)
            }
        }
    }

    /// C(x).
    pub fn count(&self, x: u64, tables: &Tables) -> Result<u64> {
        Ok(self.enumerate(x, tables)?.count())
    }

    /// C(x, r): indices n with c_n <= x and c_n + r again a member.
    pub fn count_shifted(&self, x: u64, r: u64, tables: &Tables) -> Result<u64> {
        if r < 1 {
            return Err(Error::InvalidArgument("shift r must be >= 1".into()));
        }
        let upper = self.enumerate(x.checked_add(r).ok_or(Error::Overflow("x + r"))?, tables)?;
        let mut count = 0u64;
        for (v, m) in upper.iter() {
            if v > x {
                break;
            }
            if upper.contains(v + r) {
                count += m as u64;
            }
        }
        Ok(count)
    }

    /// ρ(x): the maximum multiplicity among values <= x.
    pub fn rho(&self, x: u64, tables: &Tables) -> Result<u32> {
        let terms = self.enumerate(x, tables)?;
        if terms.is_empty() {
            return Err(Error::InvalidArgument(format!("no terms <= {x}; rho undefined")));
        }
        Ok(terms.max_multiplicity())
    }

    /// λ(x; j, p): indices k with b_k <= x and b_k ≡ j_term (mod p),
    /// multiplicities included. `j_term` must itself be a term <= x.
    pub fn lambda(&self, x: u64, j_term: u64, p: u64, tables: &Tables) -> Result<u64> {
        if !is_prime_u64(p) {
            return Err(Error::InvalidArgument(format!("lambda modulus {p} is not prime")));
        }
        if self.is_power_kind() {
            let base = self.power_base().unwrap();
            let exps = self.exponent_profile(x, tables)?;
            let e_j = exponent_of(base, j_term)
                .filter(|e| exps.contains(*e))
                .ok_or_else(|| {
                    Error::InvalidArgument(format!("{j_term} is not a term of the sequence"))
                })?;
            if base.is_multiple_of(p) {
                // Every term is ≡ 0 mod p.
                return Ok(exps.count());
            }
            let h = multiplicative_order(base, p, &tables.sieve)?;
            Ok(exps.iter().filter(|&(e, _)| e % h == e_j % h).map(|(_, m)| m as u64).sum())
        } else {
            let terms = self.enumerate(x, tables)?;
            if !terms.contains(j_term) {
                return Err(Error::InvalidArgument(format!(
                    "{j_term} is not a term of the sequence"
                )));
            }
            let c = j_term % p;
            Ok(terms.iter().filter(|&(v, _)| v % p == c).map(|(_, m)| m as u64).sum())
        }
    }

    /// Exponent-domain profile for power families at cutoff x.
    fn exponent_profile(&self, x: u64, tables: &Tables) -> Result<TermMultiset> {
        let base = self.power_base().expect("power kinds only");
        let emax = ilog_floor(base, x);
        match &self.kind {
            Kind::PowerPoly { f, .. } => power_exponent_profile(f, emax),
            Kind::PowerPolyOfPrimes { f, .. } => {
                let stop = f.tail_bound(emax);
                tables.sieve.require(stop.saturating_sub(1).max(2))?;
                let mut exps = Vec::new();
                for p in tables.sieve.primes() {
                    if p >= stop {
                        break;
                    }
                    let v = f.eval_nat(p)?;
                    if v <= emax {
                        exps.push(v);
                    }
                }
                TermMultiset::from_values(exps)
            }
            Kind::PowerPolyOfSPrime { f, .. } => {
                let stop = f.tail_bound(emax);
                tables.spf.require(stop.saturating_sub(1).max(2))?;
                let mut exps = Vec::new();
                for s in 1..stop {
                    if in_primitive_two_squares(s, &tables.spf) {
                        let v = f.eval_nat(s)?;
                        if v <= emax {
                            exps.push(v);
                        }
                    }
                }
                TermMultiset::from_values(exps)
            }
            _ => unreachable!(),
        }
    }

    /// Σ_{j: b_j <= x} Σ_{p <= (log x)^α} λ(x; b_j, p)·log p / p, plus its
    /// ratio to C(x)². Collapsing the j-sum over residue classes gives
    /// Σ_c N_c(p)² per prime; accumulation is Kahan-compensated in fixed
    /// ascending-p order. A cutoff below 2 yields the flagged zero.
    pub fn lambda_weighted_sum(&self, x: u64, alpha: f64, tables: &Tables) -> Result<LambdaSum> {
        if !(0.0..1.0).contains(&alpha) || alpha <= 0.0 {
            return Err(Error::InvalidArgument(format!("alpha must lie in (0,1), got {alpha}")));
        }
        let count = self.count(x, tables)?;
        if count == 0 {
            return Err(Error::InvalidArgument(format!("no terms <= {x}")));
        }
        let cutoff = (x as f64).ln().powf(alpha);
        if cutoff < 2.0 {
            return Ok(LambdaSum {
                sum: 0.0,
                ratio_to_count_sq: 0.0,
                prime_cutoff: cutoff,
                degenerate: true,
            });
        }
        tables.sieve.require(cutoff as u64)?;
        let mut acc = KahanSum::new();
        for p in tables.sieve.primes() {
            if p as f64 > cutoff {
                break;
            }
            let class_sq = self.residue_class_square_sum(x, p, tables)?;
            acc.add(class_sq as f64 * (p as f64).ln() / p as f64);
        }
        let sum = acc.value();
        Ok(LambdaSum {
            sum,
            ratio_to_count_sq: sum / (count as f64 * count as f64),
            prime_cutoff: cutoff,
            degenerate: false,
        })
    }

    /// Σ over residue classes c mod p of N_c², where N_c counts indices with
    /// b_k ≡ c — exactly Σ_j λ(x; b_j, p).
    fn residue_class_square_sum(&self, x: u64, p: u64, tables: &Tables) -> Result<u128> {
        let mut classes = vec![0u64; p as usize];
        if self.is_power_kind() {
            let base = self.power_base().unwrap();
            let exps = self.exponent_profile(x, tables)?;
            if base.is_multiple_of(p) {
                classes[0] = exps.count();
            } else {
                let h = multiplicative_order(base, p, &tables.sieve)?;
                for (e, m) in exps.iter() {
                    let class = mod_pow(base, e % h, p);
                    classes[class as usize] += m as u64;
                }
            }
        } else {
            for (v, m) in self.enumerate(x, tables)?.iter() {
                classes[(v % p) as usize] += m as u64;
            }
        }
        Ok(classes.iter().map(|&n| n as u128 * n as u128).sum())
    }
}

/// Result of the weighted congruence sum, with the prime cutoff (log x)^α.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LambdaSum {
    pub sum: f64,
    pub ratio_to_count_sq: f64,
    pub prime_cutoff: f64,
    pub degenerate: bool,
}

/// Coverage a spec needs from each table to enumerate up to a cutoff.
#[derive(Clone, Debug, PartialEq)]
pub struct TableNeeds {
    pub sieve: u64,
    pub spf: u64,
    pub curve: Option<(CurveParams, u64)>,
}

impl TableNeeds {
    pub fn merge(mut self, other: &TableNeeds) -> Self {
        self.sieve = self.sieve.max(other.sieve);
        self.spf = self.spf.max(other.spf);
        if self.curve.is_none() {
            self.curve = other.curve.clone();
        } else if let (Some((c, lim)), Some((oc, olim))) = (&mut self.curve, &other.curve) {
            if c.a() == oc.a() && c.b() == oc.b() {
                *lim = (*lim).max(*olim);
            }
        }
        // Building a curve table sieves primes up to its limit.
        if let Some((_, lim)) = &self.curve {
            self.sieve = self.sieve.max(*lim);
        }
        self
    }
}

fn pow_u64(base: u64, e: u64) -> u64 {
    base.pow(e as u32)
}

/// Recover e with base^e == v, if v is an exact power.
fn exponent_of(base: u64, v: u64) -> Option<u64> {
    if v == 0 {
        return None;
    }
    let mut rem = v;
    let mut e = 0u64;
    while rem.is_multiple_of(base) {
        rem /= base;
        e += 1;
    }
    (rem == 1).then_some(e)
}

impl SequenceSpec {
    /// Plain-text record form, e.g. `kind=power-poly;a=2;f=1,0,1`.
    pub fn to_record(&self) -> String {
        match &self.kind {
            Kind::Primes => "kind=primes".into(),
            Kind::SumsTwoSquares => "kind=two-squares".into(),
            Kind::PrimitiveTwoSquares => "kind=primitive-two-squares".into(),
            Kind::PowerPoly { base, f } => format!("kind=power-poly;a={base};f={f}"),
            Kind::PolyOfPrimes { f } => format!("kind=poly-primes;f={f}"),
            Kind::PolyOfSPrime { f } => format!("kind=poly-primitive-two-squares;f={f}"),
            Kind::PowerPolyOfPrimes { base, f } => {
                format!("kind=power-poly-primes;a={base};f={f}")
            }
            Kind::PowerPolyOfSPrime { base, f } => {
                format!("kind=power-poly-primitive-two-squares;a={base};f={f}")
            }
            Kind::PolyOfCurveOrders { curve, f, include_bad } => format!(
                "kind=poly-curve-orders;curve={};f={f};bad={}",
                curve.id(),
                if *include_bad { "include" } else { "exclude" }
            ),
        }
    }

    /// Parse the record form. Bare kind names work for the set families.
    pub fn parse_record(s: &str) -> Result<Self> {
        let mut kind = None;
        let mut base = None;
        let mut f = None;
        let mut curve = None;
        let mut bad = false;
        for field in s.split(';') {
            let field = field.trim();
            if field.is_empty() {
                continue;
            }
            let (key, value) = field.split_once('=').unwrap_or(("kind", field));
            match key.trim() {
                "kind" => kind = Some(value.trim().to_string()),
                "a" => {
                    base = Some(value.trim().parse::<u64>().map_err(|e| {
                        Error::InvalidArgument(format!("bad base {value:?}: {e}"))
                    })?)
                }
                "f" => f = Some(value.trim().parse::<Polynomial>()?),
                "curve" => {
                    curve = Some(crate::elliptic::curated_curve(value.trim()).ok_or_else(
                        || Error::InvalidArgument(format!("unknown curve id {value:?}")),
                    )?)
                }
                "bad" => {
                    bad = match value.trim() {
                        "include" => true,
                        "exclude" => false,
                        other => {
                            return Err(Error::InvalidArgument(format!(
                                "bad= must be include or exclude, got {other:?}"
                            )))
                        }
                    }
                }
                other => {
                    return Err(Error::InvalidArgument(format!("unknown spec field {other:?}")))
                }
            }
        }
        let kind = kind.ok_or_else(|| Error::InvalidArgument("spec needs a kind".into()))?;
        let need_f = || f.clone().ok_or_else(|| Error::InvalidArgument("spec needs f=".into()));
        let need_a = || base.ok_or_else(|| Error::InvalidArgument("spec needs a=".into()));
        match kind.as_str() {
            "primes" => Ok(SequenceSpec::primes()),
            "two-squares" => Ok(SequenceSpec::sums_two_squares()),
            "primitive-two-squares" => Ok(SequenceSpec::primitive_two_squares()),
            "power-poly" => SequenceSpec::power_poly(need_a()?, need_f()?),
            "poly-primes" => SequenceSpec::poly_of_primes(need_f()?),
            "poly-primitive-two-squares" => SequenceSpec::poly_of_s_prime(need_f()?),
            "power-poly-primes" => SequenceSpec::power_poly_of_primes(need_a()?, need_f()?),
            "power-poly-primitive-two-squares" => {
                SequenceSpec::power_poly_of_s_prime(need_a()?, need_f()?)
            }
            "poly-curve-orders" => {
                let curve = curve
                    .ok_or_else(|| Error::InvalidArgument("spec needs curve=".into()))?;
                SequenceSpec::poly_of_curve_orders(curve, need_f()?, bad)
            }
            other => Err(Error::InvalidArgument(format!("unknown sequence kind {other:?}"))),
        }
    }
}

impl std::fmt::Display for SequenceSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_record())
    }
}

impl std::str::FromStr for SequenceSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse_record(s)
    }
}
