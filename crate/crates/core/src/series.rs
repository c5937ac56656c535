//! Truncated formal power series over exact rationals, and the
//! generating-function route to the distance counts.
//!
//! With `B(x) = 1 - sqrt(1 - 2x)`, the count of trees with leaves 1 and 2 at
//! distance `i` is `(n-2)!` times the coefficient of `x^(n-2)` in
//! `B(x)^(i-1)`.

use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::factorial;
use crate::error::{domain, Error, Result};
use crate::exact::{check_n, BigCount, BigRatio};

/// Power series truncated after degree `order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<BigRatio>,
}

impl PowerSeries {
    /// Builds a series from its low-order coefficients, padding with zeros up
    /// to `order` and dropping anything beyond it.
    pub fn new(mut coeffs: Vec<BigRatio>, order: usize) -> Self {
        coeffs.resize(order + 1, BigRatio::zero());
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::new(vec![BigRatio::one()], order)
    }

    /// The series `x` (or 0 when `order == 0`).
    pub fn x(order: usize) -> Self {
        Self::new(vec![BigRatio::zero(), BigRatio::one()], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRatio] {
        &self.coeffs
    }

    /// Coefficient of `x^k`; zero past the truncation order.
    pub fn coeff(&self, k: usize) -> BigRatio {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRatio::zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs[..=order.min(self.order())].to_vec(), order)
    }

    /// Lowest degree with a non-zero coefficient.
    fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Product truncated to `order`.
    pub fn mul_truncated(&self, other: &Self, order: usize) -> Self {
        let mut out = vec![BigRatio::zero(); order + 1];
        let (Some(va), Some(vb)) = (self.valuation(), other.valuation()) else {
            return Self::new(out, order);
        };
        for (i, a) in self.coeffs.iter().enumerate().skip(va) {
            if i + vb > order {
                break;
            }
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().skip(vb) {
                if i + j > order {
                    break;
                }
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self::new(out, order)
    }

    /// `self^e` truncated to `order` (`order <= self.order()`).
    pub fn pow(&self, e: u64, order: usize) -> Result<Self> {
        series_power(self, e, order)
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;

    fn add(self, rhs: Self) -> PowerSeries {
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order)
            .map(|k| &self.coeffs[k] + &rhs.coeffs[k])
            .collect();
        PowerSeries::new(coeffs, order)
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;

    fn sub(self, rhs: Self) -> PowerSeries {
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order)
            .map(|k| &self.coeffs[k] - &rhs.coeffs[k])
            .collect();
        PowerSeries::new(coeffs, order)
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;

    fn mul(self, rhs: Self) -> PowerSeries {
        self.mul_truncated(rhs, self.order().min(rhs.order()))
    }
}

/// Taylor expansion of `1 - sqrt(1 - 2x)` through degree `order`.
///
/// `S = sqrt(1 - 2x)` is obtained from `S^2 = 1 - 2x` coefficient by
/// coefficient: `s_0 = 1` and `2 s_m = [m = 1](-2) - sum_{j=1}^{m-1} s_j s_{m-j}`.
pub fn b_series(order: usize) -> Result<PowerSeries> {
    if order < 1 {
        return Err(domain!("series order must be at least 1"));
    }
    let mut s = vec![BigRatio::one()];
    for m in 1..=order {
        let mut rhs = if m == 1 {
            BigRatio::from_integer((-2).into())
        } else {
            BigRatio::zero()
        };
        for j in 1..m {
            rhs -= &s[j] * &s[m - j];
        }
        s.push(rhs / BigRatio::from_integer(2.into()));
    }
    let b = s
        .into_iter()
        .enumerate()
        .map(|(k, c)| if k == 0 { BigRatio::zero() } else { -c })
        .collect();
    Ok(PowerSeries::new(b, order))
}

/// `s^e` truncated to `order`; `e = 0` gives 1.
pub fn series_power(s: &PowerSeries, e: u64, order: usize) -> Result<PowerSeries> {
    if order > s.order() {
        return Err(domain!(
            "cannot raise a series of order {} to order {order}",
            s.order()
        ));
    }
    let mut base = s.truncate(order);
    let mut acc = PowerSeries::one(order);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul_truncated(&base, order);
        }
        e >>= 1;
        if e > 0 {
            base = base.mul_truncated(&base, order);
        }
    }
    Ok(acc)
}

fn to_count(value: BigRatio, n: u64, i: u64) -> Result<BigCount> {
    if !value.is_integer() || value.is_negative() {
        return Err(Error::Consistency(format!(
            "series count for n = {n}, i = {i} is {value}, not a non-negative integer"
        )));
    }
    Ok(value.to_integer().magnitude().clone())
}

/// `(n-2)! [x^(n-2)] B(x)^(i-1)`.
pub fn c_via_series(n: u64, i: u64) -> Result<BigCount> {
    check_n(n)?;
    if i < 1 || i > n - 1 {
        return Err(domain!("distance must lie in [1, {}], got {i}", n - 1));
    }
    let order = (n - 2) as usize;
    let b = b_series(order)?;
    let coeff = series_power(&b, i - 1, order)?.coeff(order);
    to_count(
        coeff * BigRatio::from_integer(BigInt::from(factorial(n - 2))),
        n,
        i,
    )
}

/// All powers `B^0, ..., B^max_order` truncated to `max_order`, for sweeping
/// [`c_via_series`] over many `(n, i)` without recomputing powers.
///
/// Truncation is exact on retained coefficients, so reading a lower degree
/// from this table gives the same value as a dedicated lower-order
/// computation.
pub struct BPowerTable {
    powers: Vec<PowerSeries>,
}

impl BPowerTable {
    pub fn new(max_order: usize) -> Result<Self> {
        let b = b_series(max_order.max(1))?;
        let mut powers = vec![PowerSeries::one(b.order())];
        for _ in 0..max_order {
            let next = powers.last().unwrap().mul_truncated(&b, b.order());
            powers.push(next);
        }
        Ok(Self { powers })
    }

    pub fn max_order(&self) -> usize {
        self.powers.len() - 1
    }

    /// [`c_via_series`] read from the table; needs `n - 2 <= max_order`.
    pub fn count(&self, n: u64, i: u64) -> Result<BigCount> {
        check_n(n)?;
        if i < 1 || i > n - 1 {
            return Err(domain!("distance must lie in [1, {}], got {i}", n - 1));
        }
        let order = (n - 2) as usize;
        if order > self.max_order() {
            return Err(domain!("table only reaches n = {}", self.max_order() + 2));
        }
        let coeff = self.powers[(i - 1) as usize].coeff(order);
        to_count(
            coeff * BigRatio::from_integer(BigInt::from(factorial(n - 2))),
            n,
            i,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::distance_count;

    fn r(a: i64, b: i64) -> BigRatio {
        BigRatio::new(a.into(), b.into())
    }

    #[test]
    fn b_series_low_order() {
        let b = b_series(4).unwrap();
        assert_eq!(b.coeffs(), &[r(0, 1), r(1, 1), r(1, 2), r(1, 2), r(5, 8)]);
        assert!(b_series(0).is_err());
    }

    #[test]
    fn b_series_squares_back() {
        for m in [1, 2, 5, 40, 200] {
            let b = b_series(m).unwrap();
            let s = &PowerSeries::one(m) - &b;
            let sq = &s * &s;
            let expected = PowerSeries::new(vec![r(1, 1), r(-2, 1)], m);
            assert_eq!(sq, expected, "order {m}");
        }
    }

    #[test]
    fn powers_of_b() {
        let b = b_series(3).unwrap();
        assert_eq!(
            series_power(&b, 2, 3).unwrap().coeffs(),
            &[r(0, 1), r(0, 1), r(1, 1), r(1, 1)]
        );
        assert_eq!(series_power(&b, 0, 3).unwrap(), PowerSeries::one(3));
        assert!(series_power(&b, 2, 4).is_err());
        // Leading terms x^(i-1) + (i-1)/2 x^i + (i-1)(i+2)/8 x^(i+1).
        let b = b_series(40).unwrap();
        for i in 1..30u64 {
            let p = series_power(&b, i - 1, 40).unwrap();
            let i_ = i as usize;
            assert_eq!(p.coeff(i_ - 1), r(1, 1));
            assert_eq!(p.coeff(i_), r(i as i64 - 1, 2));
            assert_eq!(p.coeff(i_ + 1), r((i as i64 - 1) * (i as i64 + 2), 8));
        }
    }

    #[test]
    fn truncated_product_is_exact_on_retained_terms() {
        let b = b_series(12).unwrap();
        let full = b.mul_truncated(&b, 12);
        let low = b.truncate(6).mul_truncated(&b.truncate(6), 6);
        assert_eq!(full.truncate(6), low);
        assert_eq!(&PowerSeries::zero(5) * &b.truncate(5), PowerSeries::zero(5));
        assert_eq!(PowerSeries::x(3).coeff(1), r(1, 1));
    }

    #[test]
    fn series_counts() {
        assert_eq!(c_via_series(4, 2).unwrap(), BigCount::from(1u32));
        assert_eq!(c_via_series(5, 3).unwrap(), BigCount::from(6u32));
        assert_eq!(c_via_series(5, 1).unwrap(), BigCount::from(0u32));
        assert!(c_via_series(5, 5).is_err());
        let table = BPowerTable::new(30).unwrap();
        for n in 3..=32 {
            for i in 1..n {
                let expected = distance_count(n, i).unwrap();
                assert_eq!(table.count(n, i).unwrap(), expected);
                if n <= 12 {
                    assert_eq!(c_via_series(n, i).unwrap(), expected);
                }
            }
        }
        assert!(table.count(33, 2).is_err());
    }
}
