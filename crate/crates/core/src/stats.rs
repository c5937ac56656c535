//! Empirical-versus-exact distribution comparison.

use num_traits::ToPrimitive;

use crate::exact::DistanceDistribution;

/// Kolmogorov (sup-norm) distance between the empirical CDF of a histogram
/// over distances `1..=n-1` and the exact CDF of `exact`.
///
/// Both CDFs are step functions jumping only at integers, so the supremum is
/// attained at one of the support points.
pub fn sup_distance(histogram: &[u64], exact: &DistanceDistribution) -> f64 {
    let samples: u64 = histogram.iter().sum();
    if samples == 0 {
        return f64::NAN;
    }
    let exact_cdf = exact.cdf();
    let mut running = 0u64;
    let mut worst = 0.0f64;
    for (j, target) in exact_cdf.iter().enumerate() {
        running += histogram.get(j).copied().unwrap_or(0);
        let empirical = running as f64 / samples as f64;
        let target = target.to_f64().unwrap_or(f64::NAN);
        worst = worst.max((empirical - target).abs());
    }
    worst
}

/// Dvoretzky-Kiefer-Wolfowitz half-width: with probability at least
/// `1 - alpha` the empirical CDF of `m` samples is within this sup-distance
/// of the true CDF.
pub fn dkw_bound(samples: u64, alpha: f64) -> f64 {
    ((2.0 / alpha).ln() / (2.0 * samples as f64)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::distribution;

    #[test]
    fn exact_histogram_has_zero_distance() {
        let d = distribution(5).unwrap();
        assert_eq!(sup_distance(&[0, 3, 6, 6], &d), 0.0);
        assert_eq!(sup_distance(&[0, 30, 60, 60], &d), 0.0);
        let off = sup_distance(&[0, 0, 15, 0], &d);
        assert!((off - 0.4).abs() < 1e-12);
    }

    #[test]
    fn dkw_reference_value() {
        assert!((dkw_bound(200_000, 0.01) - 0.00364).abs() < 1e-5);
    }
}
