//! Large-`n` approximations of the median and percentiles.

use std::f64::consts::LN_2;

use crate::error::{domain, Result};

/// `sqrt(4 ln 2 n)`, or with `refined` the second-order estimate
/// `sqrt(4 n ln 2) + (1/2 - ln 2)`.
pub fn median_asymptotic(n: u64, refined: bool) -> f64 {
    let leading = (4.0 * LN_2 * n as f64).sqrt();
    if refined {
        leading + (0.5 - LN_2)
    } else {
        leading
    }
}

/// `sqrt(-4 ln(1-p) n)` for `0 < p < 1`.
pub fn percentile_asymptotic(n: u64, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(domain!("p must lie strictly between 0 and 1, got {p}"));
    }
    Ok((-4.0 * (-p).ln_1p() * n as f64).sqrt())
}

/// `median(n) / sqrt(4 ln 2 n)`.
pub fn median_ratio(n: u64, median: u64) -> f64 {
    median as f64 / median_asymptotic(n, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_and_refined() {
        assert!((median_asymptotic(10_000, false) - 166.51).abs() < 0.01);
        assert!(((4.0 * LN_2).sqrt() - 1.6651).abs() < 1e-4);
        for n in [3, 10, 1000, 123_456] {
            let offset = median_asymptotic(n, true) - median_asymptotic(n, false);
            assert!((offset - (0.5 - LN_2)).abs() < 1e-12);
            assert!((offset + 0.1931).abs() < 1e-4);
        }
    }

    #[test]
    fn percentile_formula() {
        for n in [3, 100, 10_000] {
            let a = percentile_asymptotic(n, 0.5).unwrap();
            assert!((a - median_asymptotic(n, false)).abs() < 1e-9 * a);
        }
        assert!(percentile_asymptotic(100, 1e-300).unwrap() < 1e-100);
        assert!((percentile_asymptotic(100, 0.75).unwrap() - 23.55).abs() < 0.01);
        assert!(percentile_asymptotic(100, 0.0).is_err());
        assert!(percentile_asymptotic(100, 1.0).is_err());
        assert!(percentile_asymptotic(100, f64::NAN).is_err());
    }
}
