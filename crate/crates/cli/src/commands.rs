use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use leafdist_core::asymptotic::{median_asymptotic, median_ratio, percentile_asymptotic};
use leafdist_core::exact::{
    distribution, mean_distance, median as exact_median, percentile as exact_percentile,
    variance_distance, BigRatio,
};
use leafdist_core::stats::sup_distance;
use leafdist_core::tree::{monte_carlo_distribution, PhyloTree, DEFAULT_MAX_ENUM_N};
use leafdist_core::verify::{self, off_by_one_counts, VerifyConfig};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::output::{float, Table};

#[derive(Debug, Error)]
pub enum CommandError {
    #[error("{0}")]
    Domain(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("{0}")]
    Io(anyhow::Error),
}

impl CommandError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CommandError::Verification(_) => 2,
            _ => 1,
        }
    }
}

impl From<leafdist_core::Error> for CommandError {
    fn from(e: leafdist_core::Error) -> Self {
        CommandError::Domain(e.to_string())
    }
}

/// A table plus, for `verify`, the first counterexample if any check failed.
pub struct Report {
    table: Table,
    failure: Option<String>,
}

impl Report {
    pub fn into_parts(self) -> (Table, Option<String>) {
        (self.table, self.failure)
    }
}

impl From<Table> for Report {
    fn from(table: Table) -> Self {
        Self {
            table,
            failure: None,
        }
    }
}

type CmdResult = Result<Report, CommandError>;

/// Parses an exact rational `num/den` (or an integer). Decimals are refused
/// because they would silently change the exact threshold.
pub fn parse_ratio(text: &str) -> Result<BigRatio, CommandError> {
    let bad = || {
        CommandError::Domain(format!(
            "cannot parse {text:?} as an exact rational; write it as num/den, e.g. 3/4"
        ))
    };
    let (num, den) = match text.trim().split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (text.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(CommandError::Domain("denominator is zero".into()));
    }
    Ok(BigRatio::new(num, den))
}

fn parse_p(text: &str) -> Result<BigRatio, CommandError> {
    let p = parse_ratio(text)?;
    if !p.is_positive() || p >= BigRatio::one() {
        return Err(CommandError::Domain(format!(
            "p must lie strictly between 0 and 1, got {p}"
        )));
    }
    Ok(p)
}

fn to_f64(r: &BigRatio) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn dist(n: u64) -> CmdResult {
    let d = distribution(n)?;
    let mut t = Table::new(&["i", "count", "probability"]);
    for i in 1..n {
        t.push(vec![
            i.to_string(),
            d.count(i).unwrap().to_string(),
            d.probability(i).unwrap().to_string(),
        ]);
    }
    Ok(t.into())
}

pub fn median(n: u64, asymptotics: bool) -> CmdResult {
    let m = exact_median(n)?;
    if !asymptotics {
        let mut t = Table::new(&["n", "median"]);
        t.push(vec![n.to_string(), m.to_string()]);
        return Ok(t.into());
    }
    let mut t = Table::new(&["n", "median", "sqrt_4ln2_n", "refined", "ratio"]);
    t.push(vec![
        n.to_string(),
        m.to_string(),
        float(median_asymptotic(n, false)),
        float(median_asymptotic(n, true)),
        float(median_ratio(n, m)),
    ]);
    Ok(t.into())
}

pub fn percentile(n: u64, p: &str) -> CmdResult {
    let p = parse_p(p)?;
    let x = exact_percentile(n, &p)?;
    let approx = percentile_asymptotic(n, to_f64(&p))?;
    let mut t = Table::new(&["n", "p", "percentile", "asymptotic"]);
    t.push(vec![
        n.to_string(),
        p.to_string(),
        x.to_string(),
        float(approx),
    ]);
    Ok(t.into())
}

pub fn stats(n: u64) -> CmdResult {
    let mu = mean_distance(n)?;
    let var = variance_distance(n)?;
    let mu_f = to_f64(&mu);
    let scale = (PI * n as f64).sqrt();
    let mut t = Table::new(&[
        "n",
        "mean",
        "variance",
        "mean_float",
        "variance_float",
        "sqrt_pi_n",
        "mean_ratio",
    ]);
    t.push(vec![
        n.to_string(),
        mu.to_string(),
        var.to_string(),
        float(mu_f),
        float(to_f64(&var)),
        float(scale),
        float(mu_f / scale),
    ]);
    Ok(t.into())
}

pub fn verify(
    max_n_enum: usize,
    max_n_formula: u64,
    max_n_series: u64,
    inject_fault: bool,
) -> CmdResult {
    if max_n_enum > DEFAULT_MAX_ENUM_N {
        return Err(CommandError::Domain(format!(
            "--max-n-enum {max_n_enum} exceeds the enumeration limit {DEFAULT_MAX_ENUM_N}"
        )));
    }
    let config = VerifyConfig {
        max_n_enum,
        max_n_formula,
        max_n_series,
        ..VerifyConfig::default()
    };
    let outcomes = if inject_fault {
        verify::run_with_counts(&config, &off_by_one_counts)?
    } else {
        verify::run(&config)?
    };
    let mut t = Table::new(&["check", "status", "cases", "counterexample"]);
    let mut failure = None;
    for o in &outcomes {
        t.push(vec![
            o.name.to_string(),
            if o.passed() { "pass" } else { "fail" }.to_string(),
            o.cases.to_string(),
            o.counterexample.clone().unwrap_or_default(),
        ]);
        if failure.is_none() {
            failure = o
                .counterexample
                .as_ref()
                .map(|c| format!("{}: {c}", o.name));
        }
    }
    Ok(Report { table: t, failure })
}

pub fn sample(n: u64, samples: u64, seed: u64, emit_newick: Option<&Path>) -> CmdResult {
    let exact = distribution(n)?;
    let histogram = match emit_newick {
        Some(path) => {
            let file = File::create(path).map_err(|e| CommandError::Io(e.into()))?;
            let mut w = BufWriter::new(file);
            let mut io_error = None;
            let mut write_tree = |tree: &PhyloTree| {
                if io_error.is_none() {
                    if let Err(e) = writeln!(w, "{}", tree.to_newick()) {
                        io_error = Some(e);
                    }
                }
            };
            let h = monte_carlo_distribution(n as usize, samples, seed, Some(&mut write_tree))?;
            if let Some(e) = io_error {
                return Err(CommandError::Io(e.into()));
            }
            w.flush().map_err(|e| CommandError::Io(e.into()))?;
            h
        }
        None => monte_carlo_distribution(n as usize, samples, seed, None)?,
    };
    let sup = sup_distance(&histogram, &exact);
    let exact_cdf = exact.cdf();
    let mut t = Table::new(&[
        "distance",
        "count",
        "frequency",
        "exact_probability",
        "empirical_cdf",
        "exact_cdf",
        "sup_distance",
    ]);
    let mut running = 0u64;
    for (j, &count) in histogram.iter().enumerate() {
        let i = j as u64 + 1;
        running += count;
        t.push(vec![
            i.to_string(),
            count.to_string(),
            float(count as f64 / samples as f64),
            exact.probability(i).unwrap().to_string(),
            float(running as f64 / samples as f64),
            exact_cdf[j].to_string(),
            float(sup),
        ]);
    }
    Ok(t.into())
}

fn parse_decades(spec: &str) -> Result<Vec<u64>, CommandError> {
    let bad = || {
        CommandError::Domain(format!(
            "--decades expects LO:HI with 1 <= LO <= HI <= 18, got {spec:?}"
        ))
    };
    let (lo, hi) = spec.split_once(':').ok_or_else(bad)?;
    let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
    let hi: u32 = hi.trim().parse().map_err(|_| bad())?;
    if lo < 1 || lo > hi || hi > 18 {
        return Err(bad());
    }
    Ok((lo..=hi).map(|e| 10u64.pow(e)).collect())
}

pub fn asympt(n_list: Vec<u64>, decades: Option<&str>, p: Option<&str>) -> CmdResult {
    let ns = match decades {
        Some(spec) => parse_decades(spec)?,
        None => n_list,
    };
    match p {
        None => {
            let mut t = Table::new(&["n", "median", "sqrt_4ln2_n", "refined", "ratio"]);
            for n in ns {
                let m = exact_median(n)?;
                t.push(vec![
                    n.to_string(),
                    m.to_string(),
                    float(median_asymptotic(n, false)),
                    float(median_asymptotic(n, true)),
                    float(median_ratio(n, m)),
                ]);
            }
            Ok(t.into())
        }
        Some(p) => {
            let p = parse_p(p)?;
            let pf = to_f64(&p);
            let mut t = Table::new(&["n", "p", "percentile", "asymptotic", "ratio"]);
            for n in ns {
                let x = exact_percentile(n, &p)?;
                let approx = percentile_asymptotic(n, pf)?;
                t.push(vec![
                    n.to_string(),
                    p.to_string(),
                    x.to_string(),
                    float(approx),
                    float(x as f64 / approx),
                ]);
            }
            Ok(t.into())
        }
    }
}
