//! Closed-form evaluation of the leaf-distance distribution.
//!
//! Throughout, `n` is the number of leaves and the random variable is the
//! distance between leaves 1 and 2 in a tree drawn uniformly from the
//! `(2n-5)!!` fully resolved unrooted trees on `n` labelled leaves. Its
//! support is `1..=n-1`.

mod moments;
mod quantile;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{double_factorial, factorial, pow2};
use crate::error::{domain, Error, Result};

pub use moments::{mean_distance, summary, variance_distance, SummaryStats};
pub use quantile::{
    median, percentile, percentile_exact, percentile_log_space, tail_at_least, EXACT_SEARCH_MAX_N,
};

/// Arbitrary-precision non-negative integer (tree counts, `c_i`).
pub type BigCount = BigUint;
/// Exact rational in lowest terms with positive denominator.
pub type BigRatio = BigRational;

pub(crate) fn ratio(num: BigUint, den: BigUint) -> BigRatio {
    BigRatio::new(BigInt::from(num), BigInt::from(den))
}

pub(crate) fn check_n(n: u64) -> Result<()> {
    if n < 3 {
        return Err(domain!("n must be at least 3, got {n}"));
    }
    Ok(())
}

fn check_index(n: u64, i: u64, what: &str) -> Result<()> {
    check_n(n)?;
    if i < 1 || i > n - 1 {
        return Err(domain!("{what} must lie in [1, {}], got {i}", n - 1));
    }
    Ok(())
}

/// Number of fully resolved unrooted trees on `n` labelled leaves:
/// 1 for `n` in {1, 2} and `(2n-5)!!` from 3 on.
pub fn tree_count(n: u64) -> Result<BigCount> {
    match n {
        0 => Err(domain!("tree_count needs at least one leaf")),
        1 | 2 => Ok(BigUint::one()),
        _ => Ok(double_factorial(2 * n - 5)),
    }
}

/// `c_i`, the number of trees on `n` leaves in which leaves 1 and 2 are at
/// distance `i`.
///
/// For `i <= n-2` this is `(i-1)(2n-i-4)! / (2(n-i-1))!!`, evaluated as a
/// division by `2^(n-i-1) (n-i-1)!` that must be exact; for `i = n-1` it is
/// `(n-2)!`.
pub fn distance_count(n: u64, i: u64) -> Result<BigCount> {
    check_index(n, i, "distance")?;
    if i == n - 1 {
        return Ok(factorial(n - 2));
    }
    let m = n - i - 1;
    let numerator = BigUint::from(i - 1) * factorial(2 * n - i - 4);
    let denominator = pow2(m) * factorial(m);
    let (q, r) = numerator.div_rem(&denominator);
    if !r.is_zero() {
        return Err(Error::Consistency(format!(
            "c_{i} for n = {n} is not an integer"
        )));
    }
    Ok(q)
}

/// The exact distribution `c_1, ..., c_{n-1}` for a fixed `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceDistribution {
    n: u64,
    counts: Vec<BigCount>,
}

impl DistanceDistribution {
    /// Wraps raw counts indexed by distance `1..=n-1` (so `counts[0]` is `c_1`).
    pub fn from_counts(n: u64, counts: Vec<BigCount>) -> Result<Self> {
        check_n(n)?;
        if counts.len() as u64 != n - 1 {
            return Err(domain!(
                "expected {} counts for n = {n}, got {}",
                n - 1,
                counts.len()
            ));
        }
        Ok(Self { n, counts })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Counts indexed from distance 1.
    pub fn counts(&self) -> &[BigCount] {
        &self.counts
    }

    /// `c_i` for `1 <= i <= n-1`.
    pub fn count(&self, i: u64) -> Option<&BigCount> {
        i.checked_sub(1).and_then(|j| self.counts.get(j as usize))
    }

    pub fn total(&self) -> BigCount {
        self.counts.iter().sum()
    }

    /// `P(d = i)`.
    pub fn probability(&self, i: u64) -> Option<BigRatio> {
        let total = self.total();
        self.count(i).map(|c| ratio(c.clone(), total))
    }

    /// Running sums `c_1, c_1 + c_2, ...`.
    pub fn cumulative_counts(&self) -> Vec<BigCount> {
        self.counts
            .iter()
            .scan(BigUint::zero(), |acc, c| {
                *acc += c;
                Some(acc.clone())
            })
            .collect()
    }

    /// `P(d <= k)` for every `k = 1..=n-1`.
    pub fn cdf(&self) -> Vec<BigRatio> {
        let total = self.total();
        self.cumulative_counts()
            .into_iter()
            .map(|s| ratio(s, total.clone()))
            .collect()
    }

    /// `E[d]` computed from the counts.
    pub fn mean(&self) -> BigRatio {
        self.raw_moment(1)
    }

    /// `Var[d]` computed from the counts.
    pub fn variance(&self) -> BigRatio {
        let mu = self.mean();
        self.raw_moment(2) - &mu * &mu
    }

    fn raw_moment(&self, power: u32) -> BigRatio {
        let weighted: BigUint = self
            .counts
            .iter()
            .enumerate()
            .map(|(j, c)| c * BigUint::from(j as u64 + 1).pow(power))
            .sum();
        ratio(weighted, self.total())
    }

    /// Largest `k` with `c_1 + ... + c_k <= p * total`, by a literal scan.
    pub fn quantile_by_scan(&self, p: &BigRatio) -> Option<u64> {
        let total = BigInt::from(self.total());
        let threshold_num = p.numer() * &total;
        let den = p.denom();
        let mut best = None;
        for (j, s) in self.cumulative_counts().into_iter().enumerate() {
            if BigInt::from(s) * den <= threshold_num {
                best = Some(j as u64 + 1);
            }
        }
        best
    }

    /// Checks normalisation and the two boundary values `c_1 = 0`,
    /// `c_{n-1} = (n-2)!`.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.n;
        if !self.counts[0].is_zero() {
            return Err(Error::Consistency(format!("c_1 != 0 for n = {n}")));
        }
        if self.counts[(n - 2) as usize] != factorial(n - 2) {
            return Err(Error::Consistency(format!("c_(n-1) != (n-2)! for n = {n}")));
        }
        if self.total() != tree_count(n)? {
            return Err(Error::Consistency(format!(
                "counts for n = {n} do not sum to (2n-5)!!"
            )));
        }
        Ok(())
    }
}

/// The full exact distribution for `n` leaves.
///
/// Uses the recurrence `c_{i+1} = c_i * 2i(n-i-1) / ((i-1)(2n-i-4))` from
/// `c_2` on, which is much cheaper than evaluating every factorial;
/// [`distance_count`] is the independent direct route.
pub fn distribution(n: u64) -> Result<DistanceDistribution> {
    check_n(n)?;
    let mut counts = Vec::with_capacity((n - 1) as usize);
    counts.push(BigUint::zero());
    if n > 3 {
        let mut c = distance_count(n, 2)?;
        counts.push(c.clone());
        for i in 2..n - 2 {
            let num = &c * BigUint::from(2 * i * (n - i - 1));
            let den = BigUint::from((i - 1) * (2 * n - i - 4));
            let (q, r) = num.div_rem(&den);
            if !r.is_zero() {
                return Err(Error::Consistency(format!(
                    "recurrence for c_{} at n = {n} is not integral",
                    i + 1
                )));
            }
            c = q;
            counts.push(c.clone());
        }
    }
    counts.push(factorial(n - 2));
    let dist = DistanceDistribution { n, counts };
    dist.check_invariants()?;
    Ok(dist)
}

/// `2^k (n-3)! (2n-4-k)! / (2 (2n-5)! (n-2-k)!)`, the probability `P(d > k)`.
///
/// At `k = n-1` the factor `1/(n-2-k)! = 1/(-1)!` is taken as 0.
pub fn tail_term(n: u64, k: u64) -> Result<BigRatio> {
    check_index(n, k, "k")?;
    if k == n - 1 {
        return Ok(BigRatio::zero());
    }
    let num = pow2(k) * factorial(n - 3) * factorial(2 * n - 4 - k);
    let den = BigUint::from(2u32) * factorial(2 * n - 5) * factorial(n - 2 - k);
    Ok(ratio(num, den))
}

/// `P(d <= k)` via the closed form `1 - tail_term(n, k)`.
pub fn cumulative_fraction(n: u64, k: u64) -> Result<BigRatio> {
    Ok(BigRatio::one() - tail_term(n, k)?)
}

/// `P(d <= k)` as the literal partial sum `(c_1 + ... + c_k) / (2n-5)!!`.
pub fn cumulative_fraction_direct(n: u64, k: u64) -> Result<BigRatio> {
    check_index(n, k, "k")?;
    let mut sum = BigUint::zero();
    for i in 1..=k {
        sum += distance_count(n, i)?;
    }
    Ok(ratio(sum, tree_count(n)?))
}

/// [`cumulative_fraction_direct`] for every `k = 1..=n-1` at once.
pub fn cumulative_fractions_direct(n: u64) -> Result<Vec<BigRatio>> {
    check_n(n)?;
    let total = tree_count(n)?;
    let mut sum = BigUint::zero();
    let mut out = Vec::with_capacity((n - 1) as usize);
    for i in 1..n {
        sum += distance_count(n, i)?;
        out.push(ratio(sum.clone(), total.clone()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn r(a: i64, b: i64) -> BigRatio {
        BigRatio::new(a.into(), b.into())
    }

    #[test]
    fn tree_count_values() {
        assert_eq!(tree_count(1).unwrap(), big(1));
        assert_eq!(tree_count(2).unwrap(), big(1));
        assert_eq!(tree_count(3).unwrap(), big(1));
        assert_eq!(tree_count(4).unwrap(), big(3));
        assert_eq!(tree_count(6).unwrap(), big(105));
        assert!(matches!(tree_count(0), Err(Error::Domain(_))));
    }

    #[test]
    fn distance_count_values() {
        assert_eq!(distance_count(4, 2).unwrap(), big(1));
        assert_eq!(distance_count(5, 4).unwrap(), big(6));
        assert_eq!(distance_count(5, 1).unwrap(), big(0));
        assert_eq!(distance_count(5, 2).unwrap(), big(3));
        assert_eq!(distance_count(5, 3).unwrap(), big(6));
        assert!(distance_count(5, 0).is_err());
        assert!(distance_count(5, 5).is_err());
        assert!(distance_count(2, 1).is_err());
    }

    #[test]
    fn distribution_values() {
        let counts = |n| {
            distribution(n)
                .unwrap()
                .counts()
                .iter()
                .map(|c| u64::try_from(c).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(counts(3), vec![0, 1]);
        assert_eq!(counts(4), vec![0, 1, 2]);
        assert_eq!(counts(5), vec![0, 3, 6, 6]);
        // Brute-force values from an independent Pruefer-sequence enumeration.
        assert_eq!(counts(6), vec![0, 15, 30, 36, 24]);
        assert_eq!(counts(7), vec![0, 105, 210, 270, 240, 120]);
        assert!(distribution(2).is_err());
    }

    #[test]
    fn recurrence_matches_direct_formula() {
        for n in 3..=120 {
            let dist = distribution(n).unwrap();
            for i in 1..n {
                assert_eq!(dist.count(i).unwrap(), &distance_count(n, i).unwrap());
            }
        }
    }

    #[test]
    fn middle_form_of_counts() {
        // (n-2)! (i-1) (n-1)(n)...(2n-i-4) / (2(n-i-1))!!, with an empty
        // product when 2n-i-4 < n-1 (i = n-2).
        for n in 3..=60u64 {
            for i in 1..=n - 2 {
                let prod = crate::arith::range_product(n - 1, 2 * n - i - 4);
                let num = factorial(n - 2) * big(i - 1) * prod;
                let den = double_factorial(2 * (n - i - 1));
                assert!((&num % &den).is_zero());
                assert_eq!(num / den, distance_count(n, i).unwrap(), "n={n} i={i}");
            }
        }
    }

    #[test]
    fn cumulative_examples() {
        assert_eq!(cumulative_fraction(4, 2).unwrap(), r(1, 3));
        assert_eq!(cumulative_fraction(5, 3).unwrap(), r(3, 5));
        assert_eq!(cumulative_fraction_direct(4, 2).unwrap(), r(1, 3));
        assert_eq!(cumulative_fraction_direct(5, 4).unwrap(), r(1, 1));
        assert_eq!(cumulative_fraction_direct(6, 1).unwrap(), r(0, 1));
        for n in 3..30 {
            assert_eq!(cumulative_fraction(n, 1).unwrap(), r(0, 1));
            assert_eq!(cumulative_fraction(n, n - 1).unwrap(), r(1, 1));
        }
        assert!(cumulative_fraction(5, 0).is_err());
        assert!(cumulative_fraction(5, 5).is_err());
        assert!(cumulative_fraction_direct(5, 5).is_err());
    }

    #[test]
    fn closed_form_matches_partial_sums() {
        for n in 3..=80 {
            let direct = cumulative_fractions_direct(n).unwrap();
            for k in 1..n {
                assert_eq!(cumulative_fraction(n, k).unwrap(), direct[(k - 1) as usize]);
                if k <= 3 {
                    assert_eq!(
                        cumulative_fraction_direct(n, k).unwrap(),
                        direct[(k - 1) as usize]
                    );
                }
            }
        }
    }

    #[test]
    fn distribution_helpers() {
        let d = distribution(5).unwrap();
        assert_eq!(d.probability(2).unwrap(), r(1, 5));
        assert_eq!(d.probability(6), None);
        assert_eq!(d.cdf(), vec![r(0, 1), r(1, 5), r(3, 5), r(1, 1)]);
        assert_eq!(d.mean(), r(16, 5));
        assert_eq!(d.variance(), r(14, 25));
        assert_eq!(d.quantile_by_scan(&r(9, 10)), Some(3));
        assert!(DistanceDistribution::from_counts(5, vec![big(1)]).is_err());
        let broken = DistanceDistribution::from_counts(4, vec![big(0), big(2), big(2)]).unwrap();
        assert!(broken.check_invariants().is_err());
    }
}
