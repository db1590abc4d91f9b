//! Elliptic-curve group orders over F_p and the order statistics built on
//! them: Hasse-interval validation, order multiplicities, and congruence
//! counts of orders in residue classes.
//!
//! Point counting is the naive O(p) character sum — exact, auditable, and
//! fast enough at desk scale. No group law, no Schoof.

use std::io::{BufRead, BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::arith::factor::isqrt;
use crate::arith::modular::legendre_reduced;
use crate::arith::sieve::PrimeSieve;
use crate::arith::{euler_phi_u64, is_prime_u64};
use crate::error::{Error, Result};

const CACHE_FORMAT_VERSION: u32 = 1;

/// Short Weierstrass curve y² = x³ + Ax + B with nonzero discriminant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveParams {
    a: i64,
    b: i64,
    id: String,
}

impl CurveParams {
    pub fn new(a: i64, b: i64, id: impl Into<String>) -> Result<Self> {
        let curve = CurveParams { a, b, id: id.into() };
        if curve.discriminant() == 0 {
            return Err(Error::InvalidArgument(format!(
                "singular curve: 4·{a}³ + 27·{b}² = 0"
            )));
        }
        Ok(curve)
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    /// Δ = 4A³ + 27B².
    pub fn discriminant(&self) -> i128 {
        4 * (self.a as i128).pow(3) + 27 * (self.b as i128).pow(2)
    }

    /// Primes p >= 3 dividing 2Δ: the bad-reduction primes.
    pub fn bad_primes(&self) -> Vec<u64> {
        let mut n = (2 * self.discriminant()).unsigned_abs();
        let mut out = Vec::new();
        let mut d: u128 = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                if d >= 3 {
                    out.push(d as u64);
                }
                while n.is_multiple_of(d) {
                    n /= d;
                }
            }
            d += 1;
        }
        if n >= 3 {
            out.push(n as u64);
        }
        out
    }
}

impl std::fmt::Display for CurveParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (y^2 = x^3 + {}x + {})", self.id, self.a, self.b)
    }
}

/// Curves used by the stock experiments. Each has an integral j-invariant
/// denominator larger than 1, so none admits complex multiplication.
pub fn curated_curves() -> Vec<CurveParams> {
    vec![
        CurveParams::new(1, 1, "a1b1").unwrap(),
        CurveParams::new(2, 3, "a2b3").unwrap(),
        CurveParams::new(5, 7, "a5b7").unwrap(),
        CurveParams::new(-2, 3, "am2b3").unwrap(),
    ]
}

pub fn curated_curve(id: &str) -> Option<CurveParams> {
    curated_curves().into_iter().find(|c| c.id == id)
}

/// #E(F_p) = 1 + Σ_x (1 + (x³+Ax+B | p)): the literal affine solution count
/// plus the point at infinity. O(p) time with a quadratic-residue table.
pub fn curve_order(curve: &CurveParams, p: u64) -> Result<u64> {
    if p < 3 || !is_prime_u64(p) {
        return Err(Error::InvalidArgument(format!(
            "curve order needs an odd prime, got {p}"
        )));
    }
    Ok(curve_order_unchecked(curve, p))
}

fn curve_order_unchecked(curve: &CurveParams, p: u64) -> u64 {
    let a = curve.a.rem_euclid(p as i64) as u64;
    let b = curve.b.rem_euclid(p as i64) as u64;
    if p < 1 << 20 {
        // Residue table: one squaring pass, then O(1) per x.
        let mut is_qr = vec![false; p as usize];
        let mut y = 0u64;
        while y <= (p - 1) / 2 {
            is_qr[(y * y % p) as usize] = true;
            y += 1;
        }
        let mut affine = 0u64;
        for x in 0..p {
            let v = (x * x % p * x + a * x + b) % p;
            if v == 0 {
                affine += 1;
            } else if is_qr[v as usize] {
                affine += 2;
            }
        }
        affine + 1
    } else {
        let mut affine = 0u64;
        for x in 0..p {
            let x2 = (x as u128 * x as u128) % p as u128;
            let v = ((x2 * x as u128 + (a as u128) * (x as u128) + b as u128) % p as u128) as u64;
            affine += (1 + legendre_reduced(v, p)) as u64;
        }
        affine + 1
    }
}

/// Exact Hasse predicate: (√p−1)² < N < (√p+1)² ⟺ (N−p−1)² < 4p.
fn hasse_ok(p: u64, order: u64) -> bool {
    let t = order as i128 - (p as i128 + 1);
    t * t < 4 * p as i128
}

/// Orders #E(F_p) for every odd prime 3 <= p <= limit. Primes dividing 2Δ
/// are flagged; Hasse is validated on the rest at build time (hard error).
pub struct CurveOrderTable {
    curve: CurveParams,
    limit: u64,
    /// (p, #E(F_p)) with p strictly increasing.
    entries: Vec<(u64, u64)>,
    /// Bad-reduction primes present in `entries`.
    bad: Vec<u64>,
}

impl CurveOrderTable {
    pub fn build(curve: &CurveParams, limit: u64, sieve: &PrimeSieve) -> Result<Self> {
        if limit < 3 {
            return Err(Error::InvalidArgument(format!(
                "order table limit must be >= 3, got {limit}"
            )));
        }
        sieve.require(limit)?;
        let primes: Vec<u64> = sieve.primes_in(3, limit).collect();
        let entries: Vec<(u64, u64)> = primes
            .par_iter()
            .map(|&p| (p, curve_order_unchecked(curve, p)))
            .collect();
        Self::assemble(curve.clone(), limit, entries)
    }

    fn assemble(curve: CurveParams, limit: u64, entries: Vec<(u64, u64)>) -> Result<Self> {
        let bad_set: Vec<u64> = curve.bad_primes();
        let mut bad = Vec::new();
        for &(p, order) in &entries {
            if bad_set.contains(&p) {
                bad.push(p);
            } else if !hasse_ok(p, order) {
                return Err(Error::Inconsistency(format!(
                    "Hasse interval violated at good prime {p}: #E = {order}"
                )));
            }
        }
        Ok(CurveOrderTable { curve, limit, entries, bad })
    }

    pub fn curve(&self) -> &CurveParams {
        &self.curve
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// All (p, #E(F_p)) pairs, ascending in p, bad primes included.
    pub fn entries(&self) -> &[(u64, u64)] {
        &self.entries
    }

    pub fn bad_primes(&self) -> &[u64] {
        &self.bad
    }

    pub fn is_bad(&self, p: u64) -> bool {
        self.bad.contains(&p)
    }

    pub fn order(&self, p: u64) -> Option<u64> {
        self.entries
            .binary_search_by_key(&p, |&(q, _)| q)
            .ok()
            .map(|i| self.entries[i].1)
    }

    /// Entries at good-reduction primes only.
    pub fn good_entries(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.entries.iter().copied().filter(move |&(p, _)| !self.is_bad(p))
    }

    pub fn require(&self, needed: u64) -> Result<()> {
        if needed > self.limit {
            return Err(Error::OrderTableExhausted { needed, have: self.limit });
        }
        Ok(())
    }

    /// Cache file name for a given key, inside `dir`.
    pub fn cache_path(dir: &Path, curve: &CurveParams, limit: u64) -> PathBuf {
        dir.join(format!("orders_A{}_B{}_L{}.csv", curve.a, curve.b, limit))
    }

    /// Persist as a text table: a header recording (A, B, limit, version),
    /// then `p,order` lines in ascending p.
    pub fn save(&self, path: &Path) -> Result<()> {
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        let mut w = BufWriter::new(std::fs::File::create(path)?);
        writeln!(
            w,
            "# curve-order-table version={} A={} B={} limit={}",
            CACHE_FORMAT_VERSION, self.curve.a, self.curve.b, self.limit
        )?;
        writeln!(w, "p,order")?;
        for &(p, order) in &self.entries {
            writeln!(w, "{p},{order}")?;
        }
        w.flush()?;
        Ok(())
    }

    /// Load a cache written by [`save`]; the header must match the requested
    /// key exactly and every good entry is re-validated against Hasse.
    pub fn load(path: &Path, curve: &CurveParams, limit: u64) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        let mut lines = std::io::BufReader::new(file).lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Cache("empty cache file".into()))??;
        let expected = format!(
            "# curve-order-table version={} A={} B={} limit={}",
            CACHE_FORMAT_VERSION, curve.a, curve.b, limit
        );
        if header != expected {
            return Err(Error::Cache(format!(
                "header mismatch: got {header:?}, want {expected:?}"
            )));
        }
        let mut entries = Vec::new();
        for line in lines {
            let line = line?;
            if line == "p,order" || line.is_empty() {
                continue;
            }
            let (p, order) = line
                .split_once(',')
                .ok_or_else(|| Error::Cache(format!("bad line {line:?}")))?;
            let p: u64 = p.parse().map_err(|e| Error::Cache(format!("bad prime: {e}")))?;
            let order: u64 = order.parse().map_err(|e| Error::Cache(format!("bad order: {e}")))?;
            if let Some(&(prev, _)) = entries.last() {
                if p <= prev {
                    return Err(Error::Cache("primes out of order".into()));
                }
            }
            entries.push((p, order));
        }
        Self::assemble(curve.clone(), limit, entries)
    }

    /// Load from `cache_dir` when a matching file exists, else build and
    /// persist. With no cache dir this is a plain build.
    pub fn build_or_load(
        curve: &CurveParams,
        limit: u64,
        sieve: &PrimeSieve,
        cache_dir: Option<&Path>,
    ) -> Result<Self> {
        if let Some(dir) = cache_dir {
            let path = Self::cache_path(dir, curve, limit);
            if path.exists() {
                return Self::load(&path, curve, limit);
            }
            let table = Self::build(curve, limit, sieve)?;
            table.save(&path)?;
            return Ok(table);
        }
        Self::build(curve, limit, sieve)
    }
}

/// Exact count of primes p >= 3 with #E(F_p) = #E(F_q), localized to the
/// Hasse window around q: matches can only occur at p with |p−q−4|² <= 16q.
/// For q = 3 that window already spans every p <= 13.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrderMultiplicity {
    pub q: u64,
    pub count: u64,
    /// count / 9√q; the count is proven to stay below 9√q.
    pub bound_ratio: f64,
}

pub fn order_multiplicity(q: u64, table: &CurveOrderTable) -> Result<OrderMultiplicity> {
    if q < 3 || !is_prime_u64(q) {
        return Err(Error::InvalidArgument(format!("need an odd prime q, got {q}")));
    }
    if table.is_bad(q) {
        return Err(Error::InvalidArgument(format!(
            "q = {q} has bad reduction; order localization presumes Hasse at q"
        )));
    }
    let target = table
        .order(q)
        .ok_or(Error::OrderTableExhausted { needed: q, have: table.limit() })?;
    let window_hi = q + 4 + isqrt(16 * q) + 1;
    table.require(window_hi)?;
    let in_window = |p: u64| {
        let t = p as i128 - q as i128 - 4;
        t * t <= 16 * q as i128
    };
    let mut count = 0u64;
    for (p, order) in table.good_entries() {
        if p > window_hi {
            break;
        }
        if in_window(p) && order == target {
            count += 1;
        }
    }
    // The proof pins count <= 9√q; integer-exact as count² <= 81q.
    if (count as u128) * (count as u128) > 81 * q as u128 {
        return Err(Error::Inconsistency(format!(
            "order multiplicity {count} at q = {q} exceeds 9*sqrt(q)"
        )));
    }
    Ok(OrderMultiplicity {
        q,
        count,
        bound_ratio: count as f64 / (9.0 * (q as f64).sqrt()),
    })
}

/// Count of primes 3 <= q <= x with #E(F_q) ≡ alpha (mod n), plus the ratio
/// count·φ(n)·log x / x that tracks the congruence-count bound shape. The
/// count is literal over every odd prime; pass `include_bad = false` to
/// restrict to good reduction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CongruenceCount {
    pub count: u64,
    pub bound_ratio: f64,
}

pub fn order_congruence_count(
    x: u64,
    n: u64,
    alpha: i64,
    include_bad: bool,
    table: &CurveOrderTable,
    sieve: &PrimeSieve,
) -> Result<CongruenceCount> {
    if n == 0 {
        return Err(Error::InvalidArgument("congruence modulus must be >= 1".into()));
    }
    table.require(x)?;
    let residue = alpha.rem_euclid(n as i64) as u64;
    let mut count = 0u64;
    for &(p, order) in table.entries() {
        if p > x {
            break;
        }
        if !include_bad && table.is_bad(p) {
            continue;
        }
        if order % n == residue {
            count += 1;
        }
    }
    let phi_n = euler_phi_u64(n, sieve)?;
    let bound_ratio = count as f64 * phi_n as f64 * (x as f64).ln() / x as f64;
    Ok(CongruenceCount { count, bound_ratio })
}
