//! Integer-coefficient polynomials f(n) = γ_d n^d + … + γ_0 with γ_d > 0,
//! plus congruence-root counting.

use crate::arith::factor::gcd;
use crate::error::{Error, Result};

/// Coefficients are stored from the constant term up; the leading
/// coefficient is positive by construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<i64>,
}

impl Polynomial {
    /// Build from `γ_0, …, γ_d`. Trailing zero coefficients are trimmed;
    /// the polynomial must be nonzero with positive leading coefficient.
    pub fn new(mut coeffs: Vec<i64>) -> Result<Self> {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == 0 {
            coeffs.pop();
        }
        match coeffs.last() {
            None => Err(Error::InvalidArgument("polynomial needs coefficients".into())),
            Some(&lead) if lead <= 0 => Err(Error::InvalidArgument(format!(
                "leading coefficient must be positive, got {lead}"
            ))),
            Some(_) => Ok(Polynomial { coeffs }),
        }
    }

    /// Shorthand for the identity polynomial f(n) = n.
    pub fn identity() -> Self {
        Polynomial { coeffs: vec![0, 1] }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn leading(&self) -> i64 {
        *self.coeffs.last().unwrap()
    }

    /// gcd(γ_d, …, γ_0).
    pub fn content(&self) -> u64 {
        self.coeffs.iter().fold(0u64, |acc, &c| gcd(acc, c.unsigned_abs()))
    }

    pub fn has_unit_content(&self) -> bool {
        self.content() == 1
    }

    /// Exact evaluation by Horner's rule in 128-bit arithmetic.
    pub fn eval_i128(&self, n: i128) -> Result<i128> {
        let mut acc: i128 = 0;
        for &c in self.coeffs.iter().rev() {
            acc = acc
                .checked_mul(n)
                .and_then(|v| v.checked_add(c as i128))
                .ok_or(Error::Overflow("polynomial evaluation"))?;
        }
        Ok(acc)
    }

    /// Evaluate at a positive integer where the sequence machinery requires
    /// f : N → N; values below 1 reject the polynomial.
    pub fn eval_nat(&self, n: u64) -> Result<u64> {
        let v = self.eval_i128(n as i128)?;
        if v < 1 {
            return Err(Error::InvalidArgument(format!(
                "polynomial is not N -> N: f({n}) = {v}"
            )));
        }
        u64::try_from(v).map_err(|_| Error::Overflow("polynomial value"))
    }

    /// f(n) mod m by modular Horner; negative coefficients are reduced first.
    pub fn eval_mod(&self, n: u64, m: u64) -> u64 {
        assert!(m >= 1);
        let n = n % m;
        let mut acc: u64 = 0;
        for &c in self.coeffs.iter().rev() {
            let c = c.rem_euclid(m as i64) as u64;
            acc = ((acc as u128 * n as u128 + c as u128) % m as u128) as u64;
        }
        acc
    }

    /// Smallest M such that f(m) > cap is certified for every m >= M, via the
    /// bound f(m) >= m^(d-1)·(γ_d·m − C) with C = Σ_{i<d} |γ_i|. Enumerations
    /// scan m < M and test f(m) <= cap exactly; nothing beyond M can qualify.
    pub fn tail_bound(&self, cap: u64) -> u64 {
        let d = self.degree() as u32;
        if d == 0 {
            // Constant polynomial: every m evaluates the same.
            return if self.coeffs[0] as i128 > cap as i128 { 1 } else { u64::MAX };
        }
        let lead = self.leading() as i128;
        let c: i128 = self.coeffs[..self.degree()]
            .iter()
            .map(|&x| (x as i128).abs())
            .sum();
        let mut m: i128 = (c / lead).max(0) + 1;
        loop {
            let low = m
                .checked_pow(d - 1)
                .and_then(|mp| mp.checked_mul(lead * m - c));
            match low {
                Some(v) if v > cap as i128 => return m as u64,
                None => return m as u64, // bound overflowed i128: astronomically past cap
                _ => m += 1,
            }
        }
    }
}

impl std::fmt::Display for Polynomial {
    /// Canonical comma form `γ_0,…,γ_d`, matching the CLI's `--poly` flag.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl std::str::FromStr for Polynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|e| Error::InvalidArgument(format!("bad coefficient {t:?}: {e}")))
            })
            .collect::<Result<Vec<i64>>>()?;
        Polynomial::new(coeffs)
    }
}

/// All residues x in [0, m) with f(x) ≡ 0 (mod m), by direct evaluation.
pub fn poly_congruence_roots(f: &Polynomial, m: u64) -> Result<Vec<u64>> {
    if m == 0 {
        return Err(Error::InvalidArgument("congruence modulus must be >= 1".into()));
    }
    Ok((0..m).filter(|&x| f.eval_mod(x, m) == 0).collect())
}

/// ρ(f, m) together with the ratio ρ(f,m) / (d·m^(1-1/d)) that tracks the
/// root-count bound for content-coprime polynomials. The absolute constant in
/// the bound is never asserted; callers pin observed envelopes instead.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KonyaginReport {
    pub root_count: u64,
    pub bound_ratio: f64,
}

pub fn konyagin_report(f: &Polynomial, m: u64) -> Result<KonyaginReport> {
    if m == 0 {
        return Err(Error::InvalidArgument("congruence modulus must be >= 1".into()));
    }
    if f.degree() == 0 {
        return Err(Error::InvalidArgument("root-count bound needs degree >= 1".into()));
    }
    if gcd(f.content(), m) != 1 {
        return Err(Error::InvalidArgument(format!(
            "coefficients and modulus share a factor: gcd(content, {m}) != 1"
        )));
    }
    let root_count = poly_congruence_roots(f, m)?.len() as u64;
    let d = f.degree() as f64;
    let bound_ratio = root_count as f64 / (d * (m as f64).powf(1.0 - 1.0 / d));
    Ok(KonyaginReport { root_count, bound_ratio })
}
