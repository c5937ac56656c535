//! One-shot cross-validation of every closed form against its independent
//! route, reporting the first counterexample of each check.

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;

use crate::arith::{double_factorial, factorial};
use crate::certificate::{
    cumulative_from_s_k, cumulative_unshifted, s2_value, s_k_closed, t_term, term_ratio_check,
    verify_certificate,
};
use crate::error::Result;
use crate::exact::{
    cumulative_fraction, distance_count, mean_distance, median, ratio, tree_count,
    variance_distance, BigCount, BigRatio,
};
use crate::series::BPowerTable;
use crate::tree::Enumerator;

/// Source of `c_i` values under test. The library formula is
/// [`distance_count`]; tests substitute faulty versions to check that the
/// suite notices.
pub type CountFn = dyn Fn(u64, u64) -> Result<BigCount> + Sync;

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    /// Largest `n` for exhaustive enumeration.
    pub max_n_enum: usize,
    /// Largest `n` for the formula-versus-formula sweeps.
    pub max_n_formula: u64,
    /// Largest `n` for the generating-function sweep.
    pub max_n_series: u64,
    /// Enumeration guard (see [`Enumerator`]).
    pub enum_limit: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            max_n_enum: 9,
            max_n_formula: 200,
            max_n_series: 100,
            enum_limit: crate::tree::DEFAULT_MAX_ENUM_N,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub name: &'static str,
    /// Number of `n` values swept.
    pub cases: u64,
    /// First failure, smallest `n` first.
    pub counterexample: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// `c_i` with the factor `(i - 1)` replaced by `i`: a deliberately wrong
/// formula for negative-control runs (integer division truncates). The
/// smallest disagreement is at `n = 4, i = 2`.
pub fn off_by_one_counts(n: u64, i: u64) -> Result<BigCount> {
    if i + 1 >= n {
        return distance_count(n, i);
    }
    let m = n - i - 1;
    Ok(BigUint::from(i) * factorial(2 * n - i - 4) / double_factorial(2 * m))
}

/// Runs `check` for every `n` in `ns` in parallel and keeps the failure with
/// the smallest `n`.
fn sweep<I>(
    name: &'static str,
    ns: I,
    check: impl Fn(u64) -> Result<Option<String>> + Sync,
) -> Result<CheckOutcome>
where
    I: IntoParallelIterator<Item = u64>,
{
    let results: Vec<(u64, Option<String>)> = ns
        .into_par_iter()
        .map(|n| check(n).map(|r| (n, r)))
        .collect::<Result<_>>()?;
    let cases = results.len() as u64;
    let counterexample = results
        .into_iter()
        .filter_map(|(n, r)| r.map(|msg| (n, msg)))
        .min_by_key(|(n, _)| *n)
        .map(|(_, msg)| msg);
    Ok(CheckOutcome {
        name,
        cases,
        counterexample,
    })
}

fn counts_for(counts: &CountFn, n: u64) -> Result<Vec<BigCount>> {
    (1..n).map(|i| counts(n, i)).collect()
}

/// Runs every check with the library's own `c_i`.
pub fn run(config: &VerifyConfig) -> Result<Vec<CheckOutcome>> {
    run_with_counts(config, &distance_count)
}

/// Runs every check with `counts` standing in for `c_i` wherever the checks
/// consume the counts formula.
pub fn run_with_counts(config: &VerifyConfig, counts: &CountFn) -> Result<Vec<CheckOutcome>> {
    let enumerator = Enumerator::new(config.enum_limit);
    let max_f = config.max_n_formula;
    let mut out = Vec::new();

    out.push(sweep(
        "enumeration_vs_formula",
        3..=config.max_n_enum as u64,
        |n| {
            let empirical = enumerator.empirical_distribution(n as usize)?;
            let formula = counts_for(counts, n)?;
            Ok(empirical
                .counts()
                .iter()
                .zip(&formula)
                .enumerate()
                .find(|(_, (e, f))| e != f)
                .map(|(j, (e, f))| {
                    format!(
                        "n={n} i={}: formula gives {f}, enumeration counts {e}",
                        j + 1
                    )
                }))
        },
    )?);

    out.push(sweep("normalization", 3..=max_f, |n| {
        let total: BigCount = counts_for(counts, n)?.iter().sum();
        let expected = tree_count(n)?;
        Ok((total != expected)
            .then(|| format!("n={n}: sum of c_i is {total}, expected {expected}")))
    })?);

    out.push(sweep("closed_form_vs_partial_sum", 3..=max_f, |n| {
        let total = tree_count(n)?;
        let mut sum = BigUint::zero();
        for (j, c) in counts_for(counts, n)?.into_iter().enumerate() {
            let k = j as u64 + 1;
            sum += c;
            let direct = ratio(sum.clone(), total.clone());
            let closed = cumulative_fraction(n, k)?;
            if direct != closed {
                return Ok(Some(format!(
                    "n={n} k={k}: closed form {closed}, partial sum {direct}"
                )));
            }
        }
        Ok(None)
    })?);

    let series_max = config.max_n_series.max(3);
    let table = BPowerTable::new((series_max - 2) as usize)?;
    out.push(sweep("series_vs_formula", 3..=series_max, |n| {
        for i in 1..n {
            let s = table.count(n, i)?;
            let f = counts(n, i)?;
            if s != f {
                return Ok(Some(format!("n={n} i={i}: series gives {s}, formula {f}")));
            }
        }
        Ok(None)
    })?);

    out.push(sweep("certificate", 4..=max_f.max(4), |n| {
        if !verify_certificate(n)? {
            return Ok(Some(format!("n={n}: Gosper relation fails")));
        }
        for i in 1..=n - 3 {
            if !term_ratio_check(n, i)? {
                return Ok(Some(format!("n={n} i={i}: term ratio mismatch")));
            }
        }
        Ok(None)
    })?);

    out.push(sweep("telescoped_sum", 4..=max_f.max(4), |n| {
        let mut running = BigUint::zero();
        for k in 2..=n - 2 {
            running += t_term(n, k - 1)?;
            let closed = s_k_closed(n, k)?;
            if closed != running {
                return Ok(Some(format!(
                    "n={n} k={k}: closed {closed}, summed {running}"
                )));
            }
            if k == 2 && running != s2_value(n)? {
                return Ok(Some(format!("n={n}: S_2 differs from 4(2n-6)!/(n-3)!")));
            }
            if cumulative_from_s_k(n, k)? != cumulative_fraction(n, k)? {
                return Ok(Some(format!(
                    "n={n} k={k}: shifted sum does not reassemble"
                )));
            }
        }
        for k in 1..n {
            if cumulative_unshifted(n, k)? != cumulative_fraction(n, k)? {
                return Ok(Some(format!(
                    "n={n} k={k}: unshifted sum does not reassemble"
                )));
            }
        }
        Ok(None)
    })?);

    out.push(sweep("moments", 3..=max_f, |n| {
        let c = counts_for(counts, n)?;
        let total = tree_count(n)?;
        let first: BigUint = c
            .iter()
            .enumerate()
            .map(|(j, ci)| ci * (j as u64 + 1))
            .sum();
        let second: BigUint = c
            .iter()
            .enumerate()
            .map(|(j, ci)| ci * (j as u64 + 1).pow(2))
            .sum();
        let mu = ratio(first, total.clone());
        let var = ratio(second, total) - &mu * &mu;
        if mu != mean_distance(n)? || var != variance_distance(n)? {
            return Ok(Some(format!(
                "n={n}: moments disagree (counts give mean {mu}, variance {var})"
            )));
        }
        Ok(None)
    })?);

    out.push(sweep("median_bracketing", 3..=max_f, |n| {
        let m = median(n)?;
        let half = BigRatio::new(1.into(), 2.into());
        let below = cumulative_fraction(n, m)? <= half;
        let above = m == n - 1 || cumulative_fraction(n, m + 1)? > half;
        Ok((!(below && above)).then(|| format!("n={n}: median {m} is not bracketed")))
    })?);

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> VerifyConfig {
        VerifyConfig {
            max_n_enum: 6,
            max_n_formula: 40,
            max_n_series: 30,
            ..VerifyConfig::default()
        }
    }

    #[test]
    fn library_passes() {
        let report = run(&small()).unwrap();
        assert_eq!(report.len(), 8);
        for c in &report {
            assert!(c.passed(), "{}: {:?}", c.name, c.counterexample);
            assert!(c.cases > 0);
        }
    }

    #[test]
    fn off_by_one_is_caught_at_smallest_n() {
        let report = run_with_counts(&small(), &off_by_one_counts).unwrap();
        let enumeration = &report[0];
        assert!(!enumeration.passed());
        assert!(enumeration
            .counterexample
            .as_ref()
            .unwrap()
            .starts_with("n=4 i=2"));
        assert!(!report
            .iter()
            .find(|c| c.name == "normalization")
            .unwrap()
            .passed());
    }

    #[test]
    fn tiny_enumeration_bound() {
        let config = VerifyConfig {
            max_n_enum: 4,
            max_n_formula: 10,
            max_n_series: 10,
            ..VerifyConfig::default()
        };
        assert!(run(&config).unwrap().iter().all(CheckOutcome::passed));
    }
}
