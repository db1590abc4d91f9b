//! Thin CLI over the experiment runner: flags (or a config file, flags
//! winning) build an [`romanoff::experiment::ExperimentConfig`], then the
//! run writes CSV/JSON reports and prints what it wrote.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use romanoff::experiment::{parse_config_file, run, ExperimentConfig};

/// Reproducible number-theory experiments with CSV/JSON reports.
///
/// Experiments: romanoff-density, moment-decomposition, shifted-bound,
/// lambda-sum, hasse-scan, order-multiplicity, david-wu, euler-moment,
/// elliptic-moment, order-sum, s2s-progression, analytic-inequalities,
/// konyagin-roots, brun-titchmarsh.
#[derive(Parser, Debug)]
#[command(name = "romanoff", version, about)]
struct Cli {
    /// Experiment name.
    #[arg(long)]
    experiment: Option<String>,

    /// Config file of `key = value` lines mirroring these flags; explicit
    /// flags override the file.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Main cutoff x.
    #[arg(long)]
    x: Option<String>,

    /// Comma-separated cutoffs for experiments that sweep x.
    #[arg(long = "x-grid")]
    x_grid: Option<String>,

    /// A-side sequence, e.g. `primes` or `kind=primitive-two-squares`.
    #[arg(long = "spec-a")]
    spec_a: Option<String>,

    /// B-side sequence, e.g. `kind=power-poly;a=2;f=0,1`.
    #[arg(long = "spec-b")]
    spec_b: Option<String>,

    /// Curve: a curated id (a1b1, a2b3, a5b7, am2b3) or a raw `A,B` pair.
    #[arg(long)]
    curve: Option<String>,

    /// Polynomial coefficients from the constant term up, e.g. `1,0,1`.
    #[arg(long)]
    poly: Option<String>,

    /// Power base a.
    #[arg(long)]
    base: Option<String>,

    /// Moment exponent(s): `3` or a range `1..4`.
    #[arg(long)]
    s: Option<String>,

    /// Comma-separated c1 thresholds (also the c-grid for
    /// analytic-inequalities).
    #[arg(long = "c1-grid")]
    c1_grid: Option<String>,

    /// Prime-cutoff exponent alpha; doubles as epsilon for order-sum.
    #[arg(long)]
    alpha: Option<String>,

    /// Sieve / order-table limit override.
    #[arg(long)]
    limit: Option<String>,

    /// Progression modulus k (s2s-progression, brun-titchmarsh).
    #[arg(long)]
    k: Option<String>,

    /// Progression residue l.
    #[arg(long)]
    l: Option<String>,

    /// Congruence modulus n (david-wu).
    #[arg(long)]
    modulus: Option<String>,

    /// Largest shift r for shifted-bound.
    #[arg(long = "r-max")]
    r_max: Option<String>,

    /// Secondary cap (order-sum table, analytic sum length).
    #[arg(long)]
    cap: Option<String>,

    /// Include bad-reduction primes in curve statistics.
    #[arg(long = "include-bad")]
    include_bad: bool,

    /// Worker threads; any count produces identical reports.
    #[arg(long)]
    workers: Option<String>,

    /// Output stem; writes <out>.csv and/or <out>.json.
    #[arg(long)]
    out: Option<PathBuf>,

    /// csv, json, or both.
    #[arg(long)]
    format: Option<String>,
}

impl Cli {
    fn into_map(self) -> Result<BTreeMap<String, String>, romanoff::Error> {
        let mut map = match &self.config {
            Some(path) => parse_config_file(path)?,
            None => BTreeMap::new(),
        };
        let mut set = |key: &str, value: Option<String>| {
            if let Some(v) = value {
                map.insert(key.to_string(), v);
            }
        };
        set("experiment", self.experiment);
        set("x", self.x);
        set("x-grid", self.x_grid);
        set("spec-a", self.spec_a);
        set("spec-b", self.spec_b);
        set("curve", self.curve);
        set("poly", self.poly);
        set("base", self.base);
        set("s", self.s);
        set("c1-grid", self.c1_grid);
        set("alpha", self.alpha);
        set("limit", self.limit);
        set("k", self.k);
        set("l", self.l);
        set("modulus", self.modulus);
        set("r-max", self.r_max);
        set("cap", self.cap);
        set("workers", self.workers);
        set("format", self.format);
        if self.include_bad {
            map.insert("include-bad".into(), "true".into());
        }
        if let Some(out) = self.out {
            map.insert("out".into(), out.display().to_string());
        }
        Ok(map)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let map = match cli.into_map() {
        Ok(map) => map,
        Err(e) => {
            eprintln!("romanoff: {e}");
            return ExitCode::from(2);
        }
    };
    let config = match ExperimentConfig::from_map(&map) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("romanoff: {e}");
            return ExitCode::from(2);
        }
    };
    match run(&config) {
        Ok(outcome) => {
            for file in &outcome.files {
                println!("wrote {}", file.display());
            }
            println!("wall time: {:.3}s", outcome.wall.as_secs_f64());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("romanoff: {e}");
            ExitCode::FAILURE
        }
    }
}
