//! Median and percentiles of the leaf distance.
//!
//! Both are `max { k : P(d <= k) <= p }`. Writing `T(k) = P(d > k)`, the
//! condition is `T(k) >= 1 - p`, and for `1 <= k <= n-2`
//!
//! ```text
//! T(k) = 2^(k-1) * prod_{j=n-1-k}^{n-3} j / prod_{j=2n-3-k}^{2n-5} j
//! ```
//!
//! which is strictly decreasing in `k` (consecutive ratio
//! `2(n-2-k)/(2n-4-k) < 1`) and equals 1 at `k = 1`. `T(n-1) = 0`, so the
//! answer always lies in `[1, n-2]` and can be found by binary search.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed};
use statrs::function::gamma::ln_gamma;

use super::{check_n, BigRatio};
use crate::arith::{pow2, range_product};
use crate::error::{domain, Result};

/// Above this `n`, [`percentile`] switches from the all-exact binary search
/// to [`percentile_log_space`].
pub const EXACT_SEARCH_MAX_N: u64 = 4000;

/// Relative width of the band around the threshold inside which the
/// log-space comparison is replaced by an exact one.
const LOG_MARGIN: f64 = 1e-9;

fn check_p(p: &BigRatio) -> Result<()> {
    if !p.is_positive() || *p >= BigRatio::one() {
        return Err(domain!("p must lie strictly between 0 and 1, got {p}"));
    }
    Ok(())
}

/// Exact test of `T(k) >= q` for `1 <= k <= n-1`, by cross-multiplication.
pub fn tail_at_least(n: u64, k: u64, q: &BigRatio) -> Result<bool> {
    check_n(n)?;
    if k < 1 || k > n - 1 {
        return Err(domain!("k must lie in [1, {}], got {k}", n - 1));
    }
    if k == n - 1 {
        return Ok(!q.is_positive());
    }
    let lhs = pow2(k - 1) * range_product(n - 1 - k, n - 3);
    let rhs = range_product(2 * n - 3 - k, 2 * n - 5);
    Ok(BigInt::from(lhs) * q.denom() >= BigInt::from(rhs) * q.numer())
}

/// Largest `k` in `[lo, hi]` with `pred(k)`, given `pred(lo)` holds and the
/// predicate is monotone (true then false).
fn last_true(mut lo: u64, mut hi: u64, mut pred: impl FnMut(u64) -> Result<bool>) -> Result<u64> {
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if pred(mid)? {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    Ok(lo)
}

/// The `p`-percentile `max { k : c_1 + ... + c_k <= p (2n-5)!! }` for
/// `0 < p < 1`. Exact for every `n`.
pub fn percentile(n: u64, p: &BigRatio) -> Result<u64> {
    if n <= EXACT_SEARCH_MAX_N {
        percentile_exact(n, p)
    } else {
        percentile_log_space(n, p)
    }
}

/// `median(n) = percentile(n, 1/2)`.
pub fn median(n: u64) -> Result<u64> {
    percentile(n, &BigRatio::new(1.into(), 2.into()))
}

/// Binary search using only exact big-integer comparisons.
pub fn percentile_exact(n: u64, p: &BigRatio) -> Result<u64> {
    check_n(n)?;
    check_p(p)?;
    let q = BigRatio::one() - p;
    last_true(1, n - 2, |k| tail_at_least(n, k, &q))
}

/// `ln T(k)` through log-gamma:
/// `(k-1) ln 2 + ln G(n-2) - ln G(n-1-k) + ln G(2n-3-k) - ln G(2n-4)`.
fn ln_tail(n: u64, k: u64) -> f64 {
    let n = n as f64;
    let k = k as f64;
    (k - 1.0) * std::f64::consts::LN_2 + ln_gamma(n - 2.0) - ln_gamma(n - 1.0 - k)
        + ln_gamma(2.0 * n - 3.0 - k)
        - ln_gamma(2.0 * n - 4.0)
}

/// Binary search on `ln T(k)` in double precision.
///
/// A probe is decided in floating point only when `ln T(k)` and `ln(1-p)`
/// differ by more than `1e-9` times the largest log-gamma term involved;
/// otherwise the comparison is redone exactly with [`tail_at_least`]. Every
/// probe is therefore decided correctly and the result is exact.
pub fn percentile_log_space(n: u64, p: &BigRatio) -> Result<u64> {
    check_n(n)?;
    check_p(p)?;
    let q = BigRatio::one() - p;
    let ln_q = ln_ratio(&q);
    let scale = ln_gamma(2.0 * n as f64 - 4.0).abs().max(1.0);
    last_true(1, n - 2, |k| {
        let margin = ln_tail(n, k) - ln_q;
        if margin.abs() > LOG_MARGIN * scale {
            Ok(margin > 0.0)
        } else {
            tail_at_least(n, k, &q)
        }
    })
}

/// Natural log of a positive rational, robust to numerators and
/// denominators beyond the `f64` range.
fn ln_ratio(q: &BigRatio) -> f64 {
    ln_big(q.numer().magnitude()) - ln_big(q.denom().magnitude())
}

fn ln_big(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return num_traits::ToPrimitive::to_f64(v)
            .unwrap_or(f64::INFINITY)
            .ln();
    }
    let shift = bits - 64;
    let top = num_traits::ToPrimitive::to_f64(&(v >> shift)).unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{cumulative_fraction, distribution};

    fn r(a: i64, b: i64) -> BigRatio {
        BigRatio::new(a.into(), b.into())
    }

    #[test]
    fn small_examples() {
        assert_eq!(median(3).unwrap(), 1);
        assert_eq!(median(4).unwrap(), 2);
        assert_eq!(median(5).unwrap(), 2);
        assert_eq!(percentile(5, &r(9, 10)).unwrap(), 3);
        assert_eq!(percentile(5, &r(1, 2)).unwrap(), 2);
        assert_eq!(percentile(4, &r(1, 4)).unwrap(), 1);
    }

    #[test]
    fn domain_errors() {
        assert!(median(2).is_err());
        assert!(percentile(10, &r(0, 1)).is_err());
        assert!(percentile(10, &r(1, 1)).is_err());
        assert!(percentile(10, &r(-1, 3)).is_err());
        assert!(percentile_log_space(10, &r(3, 2)).is_err());
        assert!(tail_at_least(10, 0, &r(1, 2)).is_err());
    }

    #[test]
    fn scan_agrees_with_search() {
        let ps = [
            r(1, 2),
            r(1, 4),
            r(3, 4),
            r(9, 10),
            r(1, 100),
            r(99, 100),
            r(1, 3),
        ];
        for n in 3..=150 {
            let dist = distribution(n).unwrap();
            for p in &ps {
                let expected = dist.quantile_by_scan(p).unwrap();
                assert_eq!(percentile_exact(n, p).unwrap(), expected, "n={n} p={p}");
                assert_eq!(percentile_log_space(n, p).unwrap(), expected, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn tail_predicate_matches_closed_form() {
        for n in 3..=40 {
            for k in 1..n {
                let tail = BigRatio::one() - cumulative_fraction(n, k).unwrap();
                assert!(tail_at_least(n, k, &tail).unwrap());
                if k < n - 1 {
                    let above = &tail + r(1, 1_000_000_007);
                    assert!(!tail_at_least(n, k, &above).unwrap());
                }
            }
        }
    }

    #[test]
    fn log_space_matches_exact_at_moderate_n() {
        for n in [500, 1000, 2024, 3001, 4000] {
            for p in [r(1, 2), r(1, 4), r(9, 10)] {
                assert_eq!(
                    percentile_log_space(n, &p).unwrap(),
                    percentile_exact(n, &p).unwrap()
                );
            }
        }
    }

    #[test]
    fn frozen_large_medians() {
        // Independent exact computation (linear walk over the reduced
        // inequality with Python integers).
        assert_eq!(median(100).unwrap(), 16);
        assert_eq!(median(1000).unwrap(), 52);
        assert_eq!(median(10_000).unwrap(), 166);
        assert_eq!(median(100_000).unwrap(), 526);
        assert_eq!(median(1_000_000).unwrap(), 1664);
        assert_eq!(percentile(100_000, &r(9, 10)).unwrap(), 957);
        assert_eq!(percentile(10_000, &r(1, 4)).unwrap(), 107);
    }

    #[test]
    fn ln_ratio_handles_huge_terms() {
        let big = BigRatio::new(BigInt::one() << 5000u32, (BigInt::one() << 5001u32) * 3);
        let expected = -(6.0f64).ln();
        assert!((ln_ratio(&big) - expected).abs() < 1e-12);
        assert!((ln_ratio(&r(1, 2)) + std::f64::consts::LN_2).abs() < 1e-15);
    }
}
