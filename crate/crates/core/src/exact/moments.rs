use super::{check_n, ratio, BigRatio};
use crate::arith::{factorial, pow2};
use crate::error::Result;

/// `E[d] = 4^(n-2) / C(2(n-2), n-2)`.
pub fn mean_distance(n: u64) -> Result<BigRatio> {
    check_n(n)?;
    let m = n - 2;
    let fm = factorial(m);
    let central_binomial = factorial(2 * m) / (&fm * &fm);
    Ok(ratio(pow2(2 * m), central_binomial))
}

/// `Var[d] = 4n - 6 - mu - mu^2`.
pub fn variance_distance(n: u64) -> Result<BigRatio> {
    let mu = mean_distance(n)?;
    let base = BigRatio::from_integer((4 * n - 6).into());
    Ok(base - &mu - &mu * &mu)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummaryStats {
    pub n: u64,
    pub mean: BigRatio,
    pub variance: BigRatio,
    pub median: u64,
}

pub fn summary(n: u64) -> Result<SummaryStats> {
    Ok(SummaryStats {
        n,
        mean: mean_distance(n)?,
        variance: variance_distance(n)?,
        median: super::median(n)?,
    })
}
