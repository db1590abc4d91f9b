//! The experiment runner: a validated config, table sizing, and one
//! dispatch point per experiment. The `romanoff` binary is a thin flag
//! parser over [`ExperimentConfig::from_map`] and [`run`].

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::arith::{poly_congruence_roots, prime_count_progression, Polynomial};
use crate::elliptic::{
    curated_curve, order_congruence_count, order_multiplicity, CurveOrderTable, CurveParams,
};
use crate::engine::{
    density_report, moment_decomposition, representation_counts, s2_shift_surrogate,
    shifted_bound_ratio,
};
use crate::error::{Error, Result};
use crate::moments::{
    analytic_inequalities, elliptic_totient_moment, euler_lemma_ratio, log_grid,
    order_growth_profile, order_sum_partial, s2s_progression_ratio,
};
use crate::report::{fmt_f64, write_reports, OutputFormat, ReportHeader, Table};
use crate::sequences::{SequenceSpec, TableNeeds, Tables};

/// Environment variable that overrides where curve order tables are cached.
/// Unset disables the cache entirely.
pub const CACHE_DIR_ENV: &str = "ROMANOFF_ORDER_CACHE_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentKind {
    RomanoffDensity,
    MomentDecomposition,
    ShiftedBound,
    LambdaSum,
    HasseScan,
    OrderMultiplicity,
    DavidWu,
    EulerMoment,
    EllipticMoment,
    OrderSum,
    S2sProgression,
    AnalyticInequalities,
    KonyaginRoots,
    BrunTitchmarsh,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::RomanoffDensity => "romanoff-density",
            Self::MomentDecomposition => "moment-decomposition",
            Self::ShiftedBound => "shifted-bound",
            Self::LambdaSum => "lambda-sum",
            Self::HasseScan => "hasse-scan",
            Self::OrderMultiplicity => "order-multiplicity",
            Self::DavidWu => "david-wu",
            Self::EulerMoment => "euler-moment",
            Self::EllipticMoment => "elliptic-moment",
            Self::OrderSum => "order-sum",
            Self::S2sProgression => "s2s-progression",
            Self::AnalyticInequalities => "analytic-inequalities",
            Self::KonyaginRoots => "konyagin-roots",
            Self::BrunTitchmarsh => "brun-titchmarsh",
        }
    }

    pub fn all() -> &'static [ExperimentKind] {
        &[
            Self::RomanoffDensity,
            Self::MomentDecomposition,
            Self::ShiftedBound,
            Self::LambdaSum,
            Self::HasseScan,
            Self::OrderMultiplicity,
            Self::DavidWu,
            Self::EulerMoment,
            Self::EllipticMoment,
            Self::OrderSum,
            Self::S2sProgression,
            Self::AnalyticInequalities,
            Self::KonyaginRoots,
            Self::BrunTitchmarsh,
        ]
    }
}

impl std::str::FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::all()
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Self::all().iter().map(|k| k.name()).collect();
                Error::Config(format!(
                    "unknown experiment {s:?}; expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

/// Fully resolved run parameters. Every referenced spec, curve, and
/// polynomial has already passed its construction invariants.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub x: u64,
    pub x_grid: Vec<u64>,
    pub spec_a: Option<SequenceSpec>,
    pub spec_b: Option<SequenceSpec>,
    pub curve: Option<CurveParams>,
    pub poly: Option<Polynomial>,
    pub base: Option<u64>,
    pub s_range: (u32, u32),
    pub c1_grid: Vec<f64>,
    pub alpha: Option<f64>,
    pub limit: Option<u64>,
    pub k: Option<u64>,
    pub l: i64,
    pub modulus: Option<u64>,
    pub r_max: Option<u64>,
    pub cap: Option<u64>,
    pub include_bad: bool,
    pub workers: usize,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

/// Flat `key = value` config-file parser; `#` starts a comment. Keys mirror
/// the CLI flag names without the leading dashes.
pub fn parse_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path)?;
    let mut map = BTreeMap::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::Config(format!("{}:{}: expected key = value", path.display(), idx + 1))
        })?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn parse_u64(map: &BTreeMap<String, String>, key: &str) -> Result<Option<u64>> {
    map.get(key)
        .map(|v| {
            v.replace('_', "")
                .parse::<u64>()
                .map_err(|e| Error::Config(format!("{key} = {v:?}: {e}")))
        })
        .transpose()
}

fn parse_f64(map: &BTreeMap<String, String>, key: &str) -> Result<Option<f64>> {
    map.get(key)
        .map(|v| v.parse::<f64>().map_err(|e| Error::Config(format!("{key} = {v:?}: {e}"))))
        .transpose()
}

fn parse_curve(value: &str) -> Result<CurveParams> {
    if let Some(curve) = curated_curve(value) {
        return Ok(curve);
    }
    if let Some((a, b)) = value.split_once(',') {
        let a: i64 = a.trim().parse().map_err(|e| Error::Config(format!("curve A: {e}")))?;
        let b: i64 = b.trim().parse().map_err(|e| Error::Config(format!("curve B: {e}")))?;
        return CurveParams::new(a, b, format!("a{a}b{b}"));
    }
    let ids: Vec<String> = crate::elliptic::curated_curves()
        .iter()
        .map(|c| c.id().to_string())
        .collect();
    Err(Error::Config(format!(
        "curve {value:?} is neither a curated id ({}) nor an A,B pair",
        ids.join(", ")
    )))
}

impl ExperimentConfig {
    /// Build from merged key/value pairs (config file first, flags on top).
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self> {
        let experiment: ExperimentKind = map
            .get("experiment")
            .ok_or_else(|| Error::Config("missing experiment name".into()))?
            .parse()?;
        let x = parse_u64(map, "x")?.unwrap_or(10_000);
        let x_grid = match map.get("x-grid") {
            Some(v) => v
                .split(',')
                .map(|t| {
                    t.trim()
                        .replace('_', "")
                        .parse::<u64>()
                        .map_err(|e| Error::Config(format!("x-grid entry {t:?}: {e}")))
                })
                .collect::<Result<Vec<u64>>>()?,
            None => vec![x],
        };
        let spec_a = map.get("spec-a").map(|v| v.parse::<SequenceSpec>()).transpose()?;
        let spec_b = map.get("spec-b").map(|v| v.parse::<SequenceSpec>()).transpose()?;
        let curve = map.get("curve").map(|v| parse_curve(v)).transpose()?;
        let poly = map.get("poly").map(|v| v.parse::<Polynomial>()).transpose()?;
        let base = parse_u64(map, "base")?;
        let s_range = match map.get("s") {
            None => (1, 4),
            Some(v) => match v.split_once("..") {
                Some((lo, hi)) => {
                    let lo: u32 =
                        lo.trim().parse().map_err(|e| Error::Config(format!("s: {e}")))?;
                    let hi: u32 =
                        hi.trim().parse().map_err(|e| Error::Config(format!("s: {e}")))?;
                    (lo, hi)
                }
                None => {
                    let s: u32 = v.trim().parse().map_err(|e| Error::Config(format!("s: {e}")))?;
                    (s, s)
                }
            },
        };
        if s_range.0 < 1 || s_range.0 > s_range.1 {
            return Err(Error::Config(format!("bad s range {s_range:?}")));
        }
        let c1_grid = match map.get("c1-grid") {
            Some(v) => v
                .split(',')
                .map(|t| t.trim().parse::<f64>().map_err(|e| Error::Config(format!("c1-grid: {e}"))))
                .collect::<Result<Vec<f64>>>()?,
            // Default: the log-spaced sweep 2^-6 .. 2^2.
            None => (-6..=2).map(|e| (e as f64).exp2()).collect(),
        };
        let workers = parse_u64(map, "workers")?.unwrap_or(1).max(1) as usize;
        let format = map
            .get("format")
            .map(|v| v.parse::<OutputFormat>())
            .transpose()?
            .unwrap_or_default();
        let include_bad = match map.get("include-bad").map(String::as_str) {
            None | Some("false") => false,
            Some("true") => true,
            Some(other) => {
                return Err(Error::Config(format!("include-bad must be true/false, got {other:?}")))
            }
        };
        Ok(ExperimentConfig {
            experiment,
            x,
            x_grid,
            spec_a,
            spec_b,
            curve,
            poly,
            base,
            s_range,
            c1_grid,
            alpha: parse_f64(map, "alpha")?,
            limit: parse_u64(map, "limit")?,
            k: parse_u64(map, "k")?,
            l: map
                .get("l")
                .map(|v| v.parse::<i64>().map_err(|e| Error::Config(format!("l: {e}"))))
                .transpose()?
                .unwrap_or(0),
            modulus: parse_u64(map, "modulus")?,
            r_max: parse_u64(map, "r-max")?,
            cap: parse_u64(map, "cap")?,
            include_bad,
            workers,
            out: map.get("out").map(PathBuf::from),
            format,
        })
    }

    fn spec_a(&self) -> Result<&SequenceSpec> {
        self.spec_a
            .as_ref()
            .ok_or_else(|| Error::Config("this experiment needs spec-a".into()))
    }

    fn spec_b(&self) -> Result<&SequenceSpec> {
        self.spec_b
            .as_ref()
            .ok_or_else(|| Error::Config("this experiment needs spec-b".into()))
    }

    fn curve(&self) -> Result<&CurveParams> {
        self.curve
            .as_ref()
            .ok_or_else(|| Error::Config("this experiment needs a curve".into()))
    }

    fn poly_or_identity(&self) -> Polynomial {
        self.poly.clone().unwrap_or_else(Polynomial::identity)
    }

    fn out_stem(&self) -> PathBuf {
        self.out
            .clone()
            .unwrap_or_else(|| PathBuf::from(self.experiment.name()))
    }
}

/// Cache directory for curve order tables, from the environment.
pub fn cache_dir_from_env() -> Option<PathBuf> {
    std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from)
}

/// Build tables sized for a set of needs, loading/storing curve orders
/// through the cache when one is configured.
fn build_tables(needs: &TableNeeds, cache_dir: Option<&Path>) -> Result<Tables> {
    let mut tables = Tables::new(needs.sieve, needs.spf)?;
    if let Some((curve, limit)) = &needs.curve {
        let table = CurveOrderTable::build_or_load(curve, *limit, &tables.sieve, cache_dir)?;
        tables = tables.with_curve_orders(table);
    }
    Ok(tables)
}

pub struct RunOutcome {
    pub files: Vec<PathBuf>,
    pub wall: std::time::Duration,
}

/// Execute the configured experiment and write its reports. The run happens
/// inside a worker pool of the configured size; all outputs are identical
/// for any worker count.
pub fn run(config: &ExperimentConfig) -> Result<RunOutcome> {
    let start = std::time::Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    let files = pool.install(|| dispatch(config))?;
    Ok(RunOutcome { files, wall: start.elapsed() })
}

fn dispatch(config: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    match config.experiment {
        ExperimentKind::RomanoffDensity => romanoff_density(config),
        ExperimentKind::MomentDecomposition => moment_decomposition_run(config),
        ExperimentKind::ShiftedBound => shifted_bound_run(config),
        ExperimentKind::LambdaSum => lambda_sum_run(config),
        ExperimentKind::HasseScan => hasse_scan(config),
        ExperimentKind::OrderMultiplicity => order_multiplicity_run(config),
        ExperimentKind::DavidWu => david_wu(config),
        ExperimentKind::EulerMoment => euler_moment(config),
        ExperimentKind::EllipticMoment => elliptic_moment(config),
        ExperimentKind::OrderSum => order_sum_run(config),
        ExperimentKind::S2sProgression => s2s_progression_run(config),
        ExperimentKind::AnalyticInequalities => analytic_inequalities_run(config),
        ExperimentKind::KonyaginRoots => konyagin_roots(config),
        ExperimentKind::BrunTitchmarsh => brun_titchmarsh(config),
    }
}

// The header records only config that shapes the numbers; worker count and
// wall time stay out so reruns stay byte-identical.
fn base_header(config: &ExperimentConfig) -> ReportHeader {
    ReportHeader::new(config.experiment.name())
}

fn romanoff_density(config: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let (spec_a, spec_b) = (config.spec_a()?, config.spec_b()?);
    let x = config.x;
    let needs = spec_a.table_requirements(x).merge(&spec_b.table_requirements(x));
    let tables = build_tables(&needs, cache_dir_from_env().as_deref())?;

    let profile = representation_counts(spec_a, spec_b, x, &tables)?;
    let moments = moment_decomposition(&profile)?;

    let mut header = base_header(config);
    header.push("spec-a", spec_a);
    header.push("spec-b", spec_b);
    header.push("x", x);

    let mut table = Table::new(&[
        "c1", "threshold", "count_above", "lower_bound_shape", "empirical_c2", "cauchy_ok",
    ]);
    let mut sweep = Vec::new();
    for &c1 in &config.c1_grid {
        let rep = density_report(&profile, c1)?;
        table.row(vec![
            fmt_f64(rep.c1),
            fmt_f64(rep.threshold),
            rep.count_above.to_string(),
            fmt_f64(rep.lower_bound_shape),
            fmt_f64(rep.empirical_c2),
            rep.cauchy_ok.to_string(),
        ]);
        sweep.push(serde_json::json!({
            "c1": rep.c1,
            "threshold": rep.threshold,
            "count_above": rep.count_above,
            "lower_bound_shape": rep.lower_bound_shape,
            "empirical_c2": rep.empirical_c2,
            "cauchy_ok": rep.cauchy_ok,
        }));
    }
    let first = density_report(&profile, config.c1_grid.first().copied().unwrap_or(1.0))?;
    let summary = serde_json::json!({
        "x": x,
        "spec_a": spec_a.to_record(),
        "spec_b": spec_b.to_record(),
        "a_count": profile.a_terms().count(),
        "b_count": profile.b_terms().count(),
        "rho": first.rho,
        "eta": first.eta,
        "s1": moments.s1,
        "s2": moments.s2,
        "s3": moments.s3,
        "sum_r": moments.sum_r,
        "sum_r2": moments.sum_r2.to_string(),
        "sweep": sweep,
    });
    write_reports(&config.out_stem(), config.format, &header, &table, summary)
}

fn moment_decomposition_run(config: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let (spec_a, spec_b) = (config.spec_a()?, config.spec_b()?);
    let x = config.x;
    // The shift surrogate enumerates A out to 2x; only checked at small x.
    let check_surrogate = x <= 10_000;
    let a_cutoff = if check_surrogate { 2 * x } else { x };
    let needs = spec_a
        .table_requirements(a_cutoff)
        .merge(&spec_b.table_requirements(x));
    let tables = build_tables(&needs, cache_dir_from_env().as_deref())?;

    let profile = representation_counts(spec_a, spec_b, x, &tables)?;
    let moments = moment_decomposition(&profile)?;
    let surrogate = if check_surrogate {
        Some(s2_shift_surrogate(&profile, &tables)?)
    } else {
        None
    };
    if let Some(s) = surrogate {
        if (moments.s2 as u128) > s {
            return Err(Error::Inconsistency(format!(
                "S2 = {} exceeds its shift surrogate {s}",
                moments.s2
            )));
        }
    }

    let mut header = base_header(config);
    header.push("spec-a", spec_a);
    header.push("spec-b", spec_b);
    header.push("x", x);

    let mut table = Table::new(&["statistic", "value"]);
    table.row(vec!["a_count".into(), profile.a_terms().count().to_string()]);
    table.row(vec!["b_count".into(), profile.b_terms().count().to_string()]);
    table.row(vec!["s1".into(), moments.s1.to_string()]);
    table.row(vec!["s2".into(), moments.s2.to_string()]);
    table.row(vec!["s3".into(), moments.s3.to_string()]);
    table.row(vec!["sum_r".into(), moments.sum_r.to_string()]);
    table.row(vec!["sum_r2".into(), moments.sum_r2.to_string()]);
    if let Some(s) = surrogate {
        table.row(vec!["s2_shift_surrogate".into(), s.to_string()]);
    }

    let summary = serde_json::json!({
        "x": x,
        "spec_a": spec_a.to_record(),
        "spec_b": spec_b.to_record(),
        "s1": moments.s1,
        "s2": moments.s2,
        "s3": moments.s3,
        "sum_r": moments.sum_r,
        "sum_r2": moments.sum_r2.to_string(),
        "identity_s2_equals_s3": moments.s2 == moments.s3,
        "identity_sum_r2": true,
        "s2_shift_surrogate": surrogate.map(|s| s.to_string()),
    });
    write_reports(&config.out_stem(), config.format, &header, &table, summary)
}

fn shifted_bound_run(config: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let spec_a = config.spec_a()?;
    let x = config.x;
    let r_max = config.r_max.unwrap_or(1_000).min(x);
    let needs = spec_a.table_requirements(x + r_max);
    let tables = build_tables(&needs, None)?;
    let res = shifted_bound_ratio(spec_a, x, r_max, &tables)?;

    let mut header = base_header(config);
    header.push("spec-a", spec_a);
    header.push("x", x);
    header.push("r-max", r_max);

    let mut table = Table::new(&["r", "count", "ratio"]);
    for &(r, count, ratio) in &res.grid {
        table.row(vec![r.to_string(), count.to_string(), fmt_f64(ratio)]);
    }
    let summary = serde_json::json!({
        "x": x,
        "spec_a": spec_a.to_record(),
        "r_max": r_max,
        "sup_ratio": res.sup_ratio,
        "arg_r": res.arg_r,
    });
    write_reports(&config.out_stem(), config.format, &header, &table, summary)
}

fn lambda_sum_run(config: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let spec_b = config.spec_b()?;
    let alpha = match config.alpha.or_else(|| spec_b.lemma_alpha()) {
        Some(a) => a,
        None => {
            return Err(Error::Config(
                "this B-family has no default alpha; pass --alpha".into(),
            ))
        }
    };
    let mut header = base_header(config);
    header.push("spec-b", spec_b);
    header.push("alpha", fmt_f64(alpha));

    let mut table = Table::new(&["x", "count", "prime_cutoff", "sum", "ratio_to_count_sq", "degenerate"]);
    let mut points = Vec::new();
    for &x in &config.x_grid {
        let needs = spec_b.table_requirements(x);
        let tables = build_tables(&needs, cache_dir_from_env().as_deref())?;
        let count = spec_b.count(x, &tables)?;
        let res = spec_b.lambda_weighted_sum(x, alpha, &tables)?;
        table.row(vec![
            x.to_string(),
            count.to_string(),
            fmt_f64(res.prime_cutoff),
            fmt_f64(res.sum),
            fmt_f64(res.ratio_to_count_sq),
            res.degenerate.to_string(),
        ]);
        points.push(serde_json::json!({
            "x": x,
            "count": count,
            "prime_cutoff": res.prime_cutoff,
            "sum": res.sum,
            "ratio_to_count_sq": res.ratio_to_count_sq,
            "degenerate": res.degenerate,
        }));
    }
    let summary = serde_json::json!({
        "spec_b": spec_b.to_record(),
        "alpha": alpha,
        "points": points,
    });
    write_reports(&config.out_stem(), config.format, &header, &table, summary)
}

fn hasse_scan(config: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let limit = config.limit.unwrap_or(config.x.max(3));
    let curves = match &config.curve {
        Some(c) => vec![c.clone()],
        None => crate::elliptic::curated_curves(),
    };
    let needs = TableNeeds { sieve: limit, spf: 2, curve: None };
    let tables = build_tables(&needs, None)?;
    let cache = cache_dir_from_env();

    let mut header = base_header(config);
    header.push("limit", limit);

    let mut table = Table::new(&["curve", "good_primes", "bad_primes", "violations", "min_slack"]);
    let mut rows = Vec::new();
    for curve in &curves {
        // Build validates Hasse at every good prime (hard error on violation).
        let orders = CurveOrderTable::build_or_load(curve, limit, &tables.sieve, cache.as_deref())?;
        let mut min_slack = f64::INFINITY;
        let mut good = 0u64;
        for (p, order) in orders.good_entries() {
            // Distance to the nearer Hasse endpoint, in units of 2√p.
            let t = (order as f64 - p as f64 - 1.0).abs();
            min_slack = min_slack.min(1.0 - t / (2.0 * (p as f64).sqrt()));
            good += 1;
        }
        table.row(vec![
            curve.id().into(),
            good.to_string(),
            orders.bad_primes().len().to_string(),
            "0".into(),
            fmt_f64(min_slack),
        ]);
        rows.push(serde_json::json!({
            "curve": curve.id(),
            "a": curve.a(),
            "b": curve.b(),
            "good_primes": good,
            "bad_primes": orders.bad_primes(),
            "violations": 0,
            "min_slack": min_slack,
        }));
    }
    let summary = serde_json::json!({ "limit": limit, "curves": rows, "violations": 0 });
    write_reports(&config.out_stem(), config.format, &header, &table, summary)
}

fn order_multiplicity_run(config: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let curve = config.curve()?;
    let q_max = config.x;
    let limit = config
        .limit
        .unwrap_or(q_max + 4 + 4 * crate::arith::isqrt(q_max) + 16);
    let needs = TableNeeds { sieve: limit, spf: 2, curve: Some((curve.clone(), limit)) };
    let tables = build_tables(&needs, cache_dir_from_env().as_deref())?;
    let orders = tables.curve_orders.as_ref().unwrap();

    let mut header = base_header(config);
    header.push("curve", curve.id());
    header.push("x", q_max);
    header.push("limit", limit);

    let mut table = Table::new(&["q", "count", "bound_ratio"]);
    let mut max_count = 0u64;
    let mut arg_q = 0u64;
    let mut max_ratio = 0.0f64;
    for q in tables.sieve.primes_in(3, q_max) {
        if orders.is_bad(q) {
            continue;
        }
        let m = order_multiplicity(q, orders)?;
        if m.count > max_count {
            max_count = m.count;
            arg_q = q;
        }
        max_ratio = max_ratio.max(m.bound_ratio);
        table.row(vec![q.to_string(), m.count.to_string(), fmt_f64(m.bound_ratio)]);
    }
    let summary = serde_json::json!({
        "curve": curve.id(),
        "q_max": q_max,
        "max_count": max_count,
        "arg_q": arg_q,
        "max_bound_ratio": max_ratio,
    });
    write_reports(&config.out_stem(), config.format, &header, &table, summary)
}

fn david_wu(config: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let curve = config.curve()?;
    let x = config.x;
    let n = config
        .modulus
        .ok_or_else(|| Error::Config("david-wu needs --modulus".into()))?;
    let limit = config.limit.unwrap_or(x);
    let needs = TableNeeds { sieve: limit, spf: 2, curve: Some((curve.clone(), limit)) };
    let tables = build_tables(&needs, cache_dir_from_env().as_deref())?;
    let orders = tables.curve_orders.as_ref().unwrap();

    let mut header = base_header(config);
    header.push("curve", curve.id());
    header.push("x", x);
    header.push("modulus", n);
    header.push("include-bad", config.include_bad);

    let include_bad = config.include_bad;
    let mut table = Table::new(&["alpha", "count", "bound_ratio"]);
    let mut total = 0u64;
    let mut rows = Vec::new();
    for alpha in 0..n {
        let res = order_congruence_count(x, n, alpha as i64, include_bad, orders, &tables.sieve)?;
        total += res.count;
        table.row(vec![alpha.to_string(), res.count.to_string(), fmt_f64(res.bound_ratio)]);
        rows.push(serde_json::json!({
            "alpha": alpha,
            "count": res.count,
            "bound_ratio": res.bound_ratio,
        }));
    }
    let everything = order_congruence_count(x, 1, 0, include_bad, orders, &tables.sieve)?.count;
    if total != everything {
        return Err(Error::Inconsistency(format!(
            "congruence counts partition {total} != {everything}"
        )));
    }
    let summary = serde_json::json!({
        "curve": curve.id(),
        "x": x,
        "modulus": n,
        "include_bad": include_bad,
        "total": total,
        "classes": rows,
    });
    write_reports(&config.out_stem(), config.format, &header, &table, summary)
}

fn euler_moment(config: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let spec_b = config.spec_b()?;
    let x = config.x;
    let alpha = config.alpha.unwrap_or(0.5);
    let needs = spec_b.table_requirements(x);
    // φ of values up to x needs primes to √x; the merge already covers it.
    let tables = build_tables(&needs, cache_dir_from_env().as_deref())?;
    let terms = spec_b.enumerate(x, &tables)?;
    let mut values = Vec::new();
    for (v, m) in terms.iter() {
        for _ in 0..m {
            values.push(v);
        }
    }

    let mut header = base_header(config);
    header.push("spec-b", spec_b);
    header.push("x", x);
    header.push("alpha", fmt_f64(alpha));

    let mut table = Table::new(&["s", "lhs", "n", "prime_sum", "ratio", "fitted_constant"]);
    let mut rows = Vec::new();
    for s in config.s_range.0..=config.s_range.1 {
        let rec = euler_lemma_ratio(&values, x, alpha, s, &tables.sieve)?;
        table.row(vec![
            s.to_string(),
            fmt_f64(rec.lhs),
            rec.n_values.to_string(),
            fmt_f64(rec.prime_sum),
            fmt_f64(rec.ratio),
            fmt_f64(rec.fitted_constant),
        ]);
        rows.push(serde_json::json!({
            "s": s,
            "lhs": rec.lhs,
            "n": rec.n_values,
            "prime_sum": rec.prime_sum,
            "ratio": rec.ratio,
            "fitted_constant": rec.fitted_constant,
        }));
    }
    let summary = serde_json::json!({
        "spec_b": spec_b.to_record(),
        "x": x,
        "alpha": alpha,
        "records": rows,
    });
    write_reports(&config.out_stem(), config.format, &header, &table, summary)
}

fn elliptic_moment(config: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let curve = config.curve()?;
    let f = config.poly_or_identity();
    let x = config.x;
    let limit = config.limit.unwrap_or(x);
    // φ(f(#E)) factors values up to f((√x + 1)²): size the sieve for that.
    let max_order = x + 2 * crate::arith::isqrt(x) + 1;
    let max_value = f.eval_nat(max_order)?;
    let sieve_need = limit.max(crate::arith::isqrt(max_value) + 2);
    let needs = TableNeeds { sieve: sieve_need, spf: 2, curve: Some((curve.clone(), limit)) };
    let tables = build_tables(&needs, cache_dir_from_env().as_deref())?;
    let orders = tables.curve_orders.as_ref().unwrap();

    let mut header = base_header(config);
    header.push("curve", curve.id());
    header.push("poly", &f);
    header.push("x", x);
    header.push("include-bad", config.include_bad);

    let mut table = Table::new(&["s", "lhs", "summands", "pi_x", "fitted_c"]);
    let mut rows = Vec::new();
    for s in config.s_range.0..=config.s_range.1 {
        let rec =
            elliptic_totient_moment(&f, x, s, config.include_bad, orders, &tables.sieve)?;
        table.row(vec![
            s.to_string(),
            fmt_f64(rec.lhs),
            rec.summands.to_string(),
            rec.pi_x.to_string(),
            fmt_f64(rec.fitted_c),
        ]);
        rows.push(serde_json::json!({
            "s": s,
            "lhs": rec.lhs,
            "summands": rec.summands,
            "pi_x": rec.pi_x,
            "fitted_c": rec.fitted_c,
        }));
    }
    let summary = serde_json::json!({
        "curve": curve.id(),
        "poly": f.to_string(),
        "x": x,
        "include_bad": config.include_bad,
        "records": rows,
    });
    write_reports(&config.out_stem(), config.format, &header, &table, summary)
}

fn order_sum_run(config: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let a = config.base.unwrap_or(2);
    let epsilon = config.alpha.unwrap_or(0.5);
    let x = config.x;
    let cap = config.cap.unwrap_or(x);
    let needs = TableNeeds { sieve: x.max(cap), spf: 2, curve: None };
    let tables = build_tables(&needs, None)?;

    let partial = order_sum_partial(a, epsilon, x, &tables.sieve)?;
    // Log-spaced growth checkpoints up to the cap.
    let mut ts = vec![10u64, 32, 100, 316, 1_000, 3_162, 10_000, 31_623, 100_000];
    ts.retain(|&t| t <= cap);
    let growth = order_growth_profile(a, &ts, cap, &tables.sieve)?;

    let mut header = base_header(config);
    header.push("base", a);
    header.push("epsilon", fmt_f64(epsilon));
    header.push("x", x);
    header.push("cap", cap);

    let mut table = Table::new(&["t", "g", "ratio_to_log_t"]);
    let mut rows = Vec::new();
    for g in &growth {
        table.row(vec![g.t.to_string(), fmt_f64(g.g), fmt_f64(g.ratio_to_log_t)]);
        rows.push(serde_json::json!({"t": g.t, "g": g.g, "ratio_to_log_t": g.ratio_to_log_t}));
    }
    let summary = serde_json::json!({
        "base": a,
        "epsilon": epsilon,
        "x": x,
        "cap": cap,
        "partial_sum": partial,
        "growth": rows,
    });
    write_reports(&config.out_stem(), config.format, &header, &table, summary)
}

fn s2s_progression_run(config: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let x = config.x;
    let k = config.k.ok_or_else(|| Error::Config("s2s-progression needs --k".into()))?;
    let l = config.l;
    let needs = TableNeeds { sieve: 64, spf: x, curve: None };
    let tables = build_tables(&needs, None)?;
    let res = s2s_progression_ratio(x, k, l, &tables.spf)?;

    let mut header = base_header(config);
    header.push("x", x);
    header.push("k", k);
    header.push("l", l);

    let mut table = Table::new(&["statistic", "value"]);
    table.row(vec!["count".into(), res.count.to_string()]);
    table.row(vec!["bound_ratio".into(), fmt_f64(res.bound_ratio)]);
    table.row(vec!["mertens_product".into(), fmt_f64(res.mertens_product)]);
    table.row(vec!["mertens_ratio".into(), fmt_f64(res.mertens_ratio)]);
    table.row(vec!["regime_ok".into(), res.regime_ok.to_string()]);

    let summary = serde_json::json!({
        "x": x,
        "k": k,
        "l": l,
        "count": res.count,
        "bound_ratio": res.bound_ratio,
        "mertens_product": res.mertens_product,
        "mertens_ratio": res.mertens_ratio,
        "regime_ok": res.regime_ok,
    });
    write_reports(&config.out_stem(), config.format, &header, &table, summary)
}

fn analytic_inequalities_run(config: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let s_max = config.s_range.1.max(1);
    let cap = config.cap.unwrap_or(1_000_000);
    let cs: Vec<f64> = if config.c1_grid.len() == 9 && config.c1_grid[0] == 0.015625 {
        // Default c1 sweep was not overridden: use the stock c list.
        vec![0.5, 1.0, 2.0, 5.0]
    } else {
        config.c1_grid.clone()
    };
    let grid = log_grid(1e-3, 1e3, 1_000);
    let (sums, ents) = analytic_inequalities(s_max, cap, &cs, &grid)?;

    let mut header = base_header(config);
    header.push("s-max", s_max);
    header.push("cap", cap);

    let mut table = Table::new(&["check", "parameter", "value", "bound", "ok"]);
    for c in &sums {
        table.row(vec![
            "log_power_sum".into(),
            c.s.to_string(),
            fmt_f64(c.sum),
            fmt_f64(c.bound),
            c.ok.to_string(),
        ]);
    }
    for e in &ents {
        table.row(vec![
            "entropy_floor".into(),
            fmt_f64(e.c),
            fmt_f64(e.min_margin),
            fmt_f64(e.equality_defect),
            e.ok.to_string(),
        ]);
    }
    let all_ok = sums.iter().all(|c| c.ok) && ents.iter().all(|e| e.ok);
    if !all_ok {
        return Err(Error::Inconsistency("analytic inequality check failed".into()));
    }
    let summary = serde_json::json!({
        "s_max": s_max,
        "cap": cap,
        "log_power": sums.iter().map(|c| serde_json::json!({
            "s": c.s, "sum": c.sum, "bound": c.bound, "ok": c.ok,
        })).collect::<Vec<_>>(),
        "entropy": ents.iter().map(|e| serde_json::json!({
            "c": e.c, "min_margin": e.min_margin,
            "equality_defect": e.equality_defect, "ok": e.ok,
        })).collect::<Vec<_>>(),
        "all_ok": all_ok,
    });
    write_reports(&config.out_stem(), config.format, &header, &table, summary)
}

fn konyagin_roots(config: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let f = config
        .poly
        .clone()
        .ok_or_else(|| Error::Config("konyagin-roots needs --poly".into()))?;
    let m_max = config.x;

    let mut header = base_header(config);
    header.push("poly", &f);
    header.push("m-max", m_max);

    let mut table = Table::new(&["m", "rho", "bound_ratio"]);
    let mut sup = 0.0f64;
    let mut arg_m = 0u64;
    for m in 1..=m_max {
        if crate::arith::gcd(f.content(), m) != 1 {
            continue;
        }
        let rep = crate::arith::konyagin_report(&f, m)?;
        if rep.bound_ratio > sup {
            sup = rep.bound_ratio;
            arg_m = m;
        }
        table.row(vec![m.to_string(), rep.root_count.to_string(), fmt_f64(rep.bound_ratio)]);
    }
    let roots_at_arg = if arg_m > 0 {
        poly_congruence_roots(&f, arg_m)?
    } else {
        Vec::new()
    };
    let summary = serde_json::json!({
        "poly": f.to_string(),
        "m_max": m_max,
        "sup_bound_ratio": sup,
        "arg_m": arg_m,
        "roots_at_arg": roots_at_arg,
    });
    write_reports(&config.out_stem(), config.format, &header, &table, summary)
}

fn brun_titchmarsh(config: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let x = config.x;
    let k_max = config.k.unwrap_or(100);
    let needs = TableNeeds { sieve: x, spf: 2, curve: None };
    let tables = build_tables(&needs, None)?;

    let mut header = base_header(config);
    header.push("x", x);
    header.push("k-max", k_max);

    let mut table = Table::new(&["k", "l", "count", "bt_ratio"]);
    let mut sup = 0.0f64;
    let mut arg = (0u64, 0i64);
    for k in 1..=k_max {
        for l in 0..k.min(16) {
            if crate::arith::gcd(k, l) != 1 && !(k == 1 && l == 0) {
                continue;
            }
            let res = prime_count_progression(x, k, l as i64, &tables.sieve)?;
            if res.bt_ratio > sup {
                sup = res.bt_ratio;
                arg = (k, l as i64);
            }
            table.row(vec![
                k.to_string(),
                l.to_string(),
                res.count.to_string(),
                fmt_f64(res.bt_ratio),
            ]);
        }
    }
    let summary = serde_json::json!({
        "x": x,
        "k_max": k_max,
        "sup_bt_ratio": sup,
        "arg_k": arg.0,
        "arg_l": arg.1,
    });
    write_reports(&config.out_stem(), config.format, &header, &table, summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(pairs: &[(&str, &str)]) -> ExperimentConfig {
        let map: BTreeMap<String, String> =
            pairs.iter().map(|&(k, v)| (k.to_string(), v.to_string())).collect();
        ExperimentConfig::from_map(&map).unwrap()
    }

    #[test]
    fn config_parses_and_defaults() {
        let c = config(&[
            ("experiment", "romanoff-density"),
            ("spec-a", "primes"),
            ("spec-b", "kind=power-poly;a=2;f=0,1"),
            ("x", "1_000"),
        ]);
        assert_eq!(c.experiment, ExperimentKind::RomanoffDensity);
        assert_eq!(c.x, 1_000);
        assert_eq!(c.c1_grid.len(), 9);
        assert_eq!(c.workers, 1);
    }

    #[test]
    fn unknown_experiment_is_a_config_error() {
        let map: BTreeMap<String, String> =
            [("experiment".to_string(), "nope".to_string())].into();
        assert!(matches!(ExperimentConfig::from_map(&map), Err(Error::Config(_))));
    }

    #[test]
    fn curve_parsing() {
        assert_eq!(parse_curve("a1b1").unwrap().a(), 1);
        let custom = parse_curve("-2,3").unwrap();
        assert_eq!((custom.a(), custom.b()), (-2, 3));
        assert!(parse_curve("bogus").is_err());
        assert!(parse_curve("-3,2").is_err()); // singular
    }

    #[test]
    fn config_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        std::fs::write(
            &path,
            "# stock density run\nexperiment = romanoff-density\nx = 500\nspec-a = primes\nspec-b = kind=power-poly;a=2;f=0,1\n",
        )
        .unwrap();
        let map = parse_config_file(&path).unwrap();
        let c = ExperimentConfig::from_map(&map).unwrap();
        assert_eq!(c.x, 500);
    }

    #[test]
    fn density_run_writes_deterministic_files() {
        let dir = tempfile::tempdir().unwrap();
        let mut paths = Vec::new();
        for workers in [1usize, 4] {
            let out = dir.path().join(format!("w{workers}/report"));
            let mut c = config(&[
                ("experiment", "romanoff-density"),
                ("spec-a", "primes"),
                ("spec-b", "kind=power-poly;a=2;f=0,1"),
                ("x", "2000"),
            ]);
            c.workers = workers;
            c.out = Some(out.clone());
            let outcome = run(&c).unwrap();
            assert_eq!(outcome.files.len(), 2);
            paths.push(outcome.files);
        }
        for (a, b) in paths[0].iter().zip(&paths[1]) {
            assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
        }
    }
}
