//! The telescoping certificate behind the closed form of the cumulative
//! distribution, and the partial sums it evaluates.
//!
//! The summand is `t_i = i 2^(i+1) (2n-i-5)! / (n-i-2)!` and
//! `S_k = t_1 + ... + t_{k-1}`. Its term ratio factors as
//! `a(i)/b(i) * c(i+1)/c(i)` with `a = 2(2+i-n)`, `b = 5+i-2n`, `c = i`, and
//! `x = 1` solves `a(i) x(i+1) - b(i-1) x(i) = c(i)`, which yields
//! `S_k = b(k-1) x(k) / c(k) * t_k + g(n)` with `g(n) = 4(2n-5)!/(n-3)!`.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::arith::{factorial, pow2, range_product};
use crate::error::{domain, Error, Result};
use crate::exact::{ratio, BigCount, BigRatio};

/// Polynomial in the summation index `i` and the parameter `n` with rational
/// coefficients. Keys are `(deg_i, deg_n)`; zero coefficients are never
/// stored, so structural equality is polynomial equality.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly2 {
    terms: BTreeMap<(u32, u32), BigRatio>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(BigRatio::from_integer(c.into()), 0, 0)
    }

    /// The variable `i`.
    pub fn i() -> Self {
        Self::monomial(BigRatio::one(), 1, 0)
    }

    /// The parameter `n`.
    pub fn n() -> Self {
        Self::monomial(BigRatio::one(), 0, 1)
    }

    pub fn monomial(c: BigRatio, deg_i: u32, deg_n: u32) -> Self {
        let mut p = Self::zero();
        p.add_term((deg_i, deg_n), c);
        p
    }

    fn add_term(&mut self, key: (u32, u32), c: BigRatio) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(BigRatio::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `i^deg_i n^deg_n`.
    pub fn coeff(&self, deg_i: u32, deg_n: u32) -> BigRatio {
        self.terms
            .get(&(deg_i, deg_n))
            .cloned()
            .unwrap_or_else(BigRatio::zero)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(1), |acc, _| &acc * self)
    }

    /// Substitutes `i := q`.
    pub fn compose_i(&self, q: &Poly2) -> Self {
        let mut out = Self::zero();
        for (&(di, dn), c) in &self.terms {
            let term = &q.pow(di) * &Self::monomial(c.clone(), 0, dn);
            out = &out + &term;
        }
        out
    }

    /// `p(i + delta, n)`.
    pub fn shift_i(&self, delta: i64) -> Self {
        self.compose_i(&(&Self::i() + &Self::constant(delta)))
    }

    /// Fixes `n` to a value, leaving a polynomial in `i` alone.
    pub fn at_n(&self, n: i64) -> Self {
        let mut out = Self::zero();
        let nv = BigRatio::from_integer(n.into());
        for (&(di, dn), c) in &self.terms {
            out.add_term((di, 0), c * num_traits::pow(nv.clone(), dn as usize));
        }
        out
    }

    pub fn eval(&self, i: i64, n: i64) -> BigRatio {
        let iv = BigRatio::from_integer(i.into());
        let nv = BigRatio::from_integer(n.into());
        self.terms
            .iter()
            .map(|(&(di, dn), c)| {
                c * num_traits::pow(iv.clone(), di as usize)
                    * num_traits::pow(nv.clone(), dn as usize)
            })
            .fold(BigRatio::zero(), |acc, v| acc + v)
    }
}

impl Add for &Poly2 {
    type Output = Poly2;

    fn add(self, rhs: Self) -> Poly2 {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.add_term(k, c.clone());
        }
        out
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;

    fn neg(self) -> Poly2 {
        Poly2 {
            terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect(),
        }
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;

    fn sub(self, rhs: Self) -> Poly2 {
        self + &(-rhs)
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;

    fn mul(self, rhs: Self) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(ai, an), ca) in &self.terms {
            for (&(bi, bn), cb) in &rhs.terms {
                out.add_term((ai + bi, an + bn), ca * cb);
            }
        }
        out
    }
}

/// Polynomials `a, b, c, x` of a Gosper-style telescoping certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypergeometricCertificate {
    pub a: Poly2,
    pub b: Poly2,
    pub c: Poly2,
    pub x: Poly2,
}

impl HypergeometricCertificate {
    /// `a(i) = 2(2+i-n)`, `b(i) = 5+i-2n`, `c(i) = i`, `x(i) = 1`.
    pub fn for_leaf_distance() -> Self {
        let i = Poly2::i();
        let n = Poly2::n();
        let two = Poly2::constant(2);
        let a = &two * &(&(&Poly2::constant(2) + &i) - &n);
        let b = &(&Poly2::constant(5) + &i) - &(&two * &n);
        Self {
            a,
            b,
            c: i,
            x: Poly2::constant(1),
        }
    }

    /// `a(i) x(i+1) - b(i-1) x(i) - c(i)`; zero iff the certificate is valid.
    pub fn residual(&self) -> Poly2 {
        let lhs = &self.a * &self.x.shift_i(1);
        let rhs = &self.b.shift_i(-1) * &self.x;
        &(&lhs - &rhs) - &self.c
    }

    /// Checks the defining relation as a polynomial identity in `i` and `n`.
    pub fn holds(&self) -> bool {
        self.residual().is_zero()
    }

    /// The same certificate with `n` fixed.
    pub fn at_n(&self, n: i64) -> Self {
        Self {
            a: self.a.at_n(n),
            b: self.b.at_n(n),
            c: self.c.at_n(n),
            x: self.x.at_n(n),
        }
    }

    /// Checks that `a(i)/b(i) * c(i+1)/c(i)` equals the term ratio
    /// `2(1+i)(2+i-n) / (i(5+i-2n))`, cross-multiplied.
    pub fn factors_term_ratio(&self) -> bool {
        let i = Poly2::i();
        let n = Poly2::n();
        let ratio_num = &(&Poly2::constant(2) * &(&Poly2::constant(1) + &i))
            * &(&(&Poly2::constant(2) + &i) - &n);
        let ratio_den = &i * &(&(&Poly2::constant(5) + &i) - &(&Poly2::constant(2) * &n));
        let lhs = &(&ratio_num * &self.b) * &self.c;
        let rhs = &(&ratio_den * &self.a) * &self.c.shift_i(1);
        (&lhs - &rhs).is_zero()
    }

    /// `b(k-1) x(k) / c(k) * t_k + g(n)`, the telescoped value of `S_k`.
    pub fn telescoped_sum(&self, n: u64, k: u64) -> Result<BigRatio> {
        check_sk_range(n, k)?;
        let (ki, ni) = (k as i64, n as i64);
        let c_k = self.c.eval(ki, ni);
        if c_k.is_zero() {
            return Err(domain!("c(k) vanishes at k = {k}"));
        }
        let factor = self.b.eval(ki - 1, ni) * self.x.eval(ki, ni) / c_k;
        let t_k = BigRatio::from_integer(BigInt::from(t_term(n, k)?));
        Ok(factor * t_k + BigRatio::from_integer(BigInt::from(boundary_constant(n)?)))
    }
}

/// Checks the certificate for a concrete `n >= 4`: the identity with `n`
/// substituted must hold coefficient-wise in `i`, and so must the symbolic
/// identity in both variables.
pub fn verify_certificate(n: u64) -> Result<bool> {
    if n < 4 {
        return Err(domain!("certificate check needs n >= 4, got {n}"));
    }
    let cert = HypergeometricCertificate::for_leaf_distance();
    Ok(cert.holds() && cert.factors_term_ratio() && cert.at_n(n as i64).holds())
}

/// `t_i = i 2^(i+1) (2n-i-5)! / (n-i-2)!` for `1 <= i <= n-2`.
pub fn t_term(n: u64, i: u64) -> Result<BigCount> {
    if n < 4 || i < 1 || i > n - 2 {
        return Err(domain!(
            "t_i needs n >= 4 and 1 <= i <= n-2, got n = {n}, i = {i}"
        ));
    }
    Ok(BigUint::from(i) * pow2(i + 1) * range_product(n - i - 1, 2 * n - i - 5))
}

/// Checks `t_{i+1} i (5+i-2n) = t_i 2(1+i)(2+i-n)` exactly, for
/// `1 <= i <= n-3`.
pub fn term_ratio_check(n: u64, i: u64) -> Result<bool> {
    if n < 4 || i < 1 || i + 1 > n - 2 {
        return Err(domain!(
            "term ratio needs n >= 4 and 1 <= i <= n-3, got n = {n}, i = {i}"
        ));
    }
    let (ni, ii) = (n as i64, i as i64);
    let lhs = BigInt::from(t_term(n, i + 1)?) * (ii * (5 + ii - 2 * ni));
    let rhs = BigInt::from(t_term(n, i)?) * (2 * (1 + ii) * (2 + ii - ni));
    Ok(lhs == rhs)
}

fn check_sk_range(n: u64, k: u64) -> Result<()> {
    if n < 4 || k < 2 || k > n - 2 {
        return Err(domain!(
            "S_k needs n >= 4 and 2 <= k <= n-2, got n = {n}, k = {k}"
        ));
    }
    Ok(())
}

/// `g(n) = 4 (2n-5)! / (n-3)!`.
pub fn boundary_constant(n: u64) -> Result<BigCount> {
    if n < 4 {
        return Err(domain!("g(n) needs n >= 4"));
    }
    Ok(BigUint::from(4u32) * range_product(n - 2, 2 * n - 5))
}

/// `g(n)` recovered from the boundary case `k = 2`:
/// `S_2 - (6-2n) 2^3 (2n-7)! / (n-4)!`.
pub fn boundary_constant_from_s2(n: u64) -> Result<BigCount> {
    let s2 = BigInt::from(s_k_direct(n, 2)?);
    let first = BigInt::from(6 - 2 * n as i64)
        * BigInt::from(pow2(3) * factorial(2 * n - 7) / factorial(n - 4));
    to_count(s2 - first, "g(n)")
}

/// `4 (2n-6)! / (n-3)!`, the value of `S_2 = t_1`.
pub fn s2_value(n: u64) -> Result<BigCount> {
    if n < 4 {
        return Err(domain!("S_2 needs n >= 4"));
    }
    Ok(BigUint::from(4u32) * factorial(2 * n - 6) / factorial(n - 3))
}

fn to_count(v: BigInt, what: &str) -> Result<BigCount> {
    if v.is_negative() {
        return Err(Error::Consistency(format!("{what} came out negative: {v}")));
    }
    Ok(v.magnitude().clone())
}

/// `S_k` in closed form:
/// `(4+k-2n) 2^(k+1) (2n-k-5)! / (n-k-2)! + 4 (2n-5)! / (n-3)!`.
pub fn s_k_closed(n: u64, k: u64) -> Result<BigCount> {
    check_sk_range(n, k)?;
    let lead = BigInt::from(4 + k as i64 - 2 * n as i64)
        * BigInt::from(pow2(k + 1) * range_product(n - k - 1, 2 * n - k - 5));
    to_count(lead + BigInt::from(boundary_constant(n)?), "S_k")
}

/// `S_k = t_1 + ... + t_{k-1}` summed literally.
pub fn s_k_direct(n: u64, k: u64) -> Result<BigCount> {
    check_sk_range(n, k)?;
    let mut sum = BigUint::zero();
    for i in 1..k {
        sum += t_term(n, i)?;
    }
    Ok(sum)
}

fn prefactor(n: u64) -> BigRatio {
    ratio(factorial(n - 3), BigUint::from(4u32) * factorial(2 * n - 5))
}

/// `(n-3)!/(4(2n-5)!) sum_{i=2}^{k} (i-1) 2^i (2n-i-4)! / (n-i-1)!`, the
/// cumulative distribution before the index shift; valid for `1 <= k <= n-1`.
pub fn cumulative_unshifted(n: u64, k: u64) -> Result<BigRatio> {
    if n < 4 || k < 1 || k > n - 1 {
        return Err(domain!(
            "needs n >= 4 and 1 <= k <= n-1, got n = {n}, k = {k}"
        ));
    }
    let mut sum = BigUint::zero();
    for i in 2..=k {
        sum += BigUint::from(i - 1) * pow2(i) * range_product(n - i, 2 * n - i - 4);
    }
    Ok(prefactor(n) * BigRatio::from_integer(sum.into()))
}

/// `(n-3)!/(4(2n-5)!) S_k`, the cumulative distribution after the shift
/// `i -> i+1`; valid for `2 <= k <= n-2`.
pub fn cumulative_from_s_k(n: u64, k: u64) -> Result<BigRatio> {
    let s = s_k_closed(n, k)?;
    Ok(prefactor(n) * BigRatio::from_integer(s.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::cumulative_fraction;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn poly_arithmetic() {
        let i = Poly2::i();
        let n = Poly2::n();
        let p = &(&i + &n) * &(&i - &n);
        let q = &i.pow(2) - &n.pow(2);
        assert_eq!(p, q);
        assert_eq!(p.eval(3, 2), BigRatio::from_integer(5.into()));
        assert_eq!(i.shift_i(2).coeff(0, 0), BigRatio::from_integer(2.into()));
        assert!((&p - &q).is_zero());
        assert_eq!(p.at_n(2), &i.pow(2) - &Poly2::constant(4));
    }

    #[test]
    fn certificate_identity() {
        let cert = HypergeometricCertificate::for_leaf_distance();
        assert!(cert.holds());
        assert!(cert.factors_term_ratio());
        assert!(verify_certificate(4).unwrap());
        assert!(verify_certificate(10).unwrap());
        assert!(verify_certificate(3).is_err());
    }

    #[test]
    fn perturbed_certificates_fail() {
        let mut bad = HypergeometricCertificate::for_leaf_distance();
        bad.x = Poly2::i();
        assert!(!bad.holds());
        let mut bad = HypergeometricCertificate::for_leaf_distance();
        bad.b = bad.b.shift_i(1);
        assert!(!bad.holds());
        assert!(!bad.factors_term_ratio());
    }

    #[test]
    fn t_and_ratio() {
        assert_eq!(t_term(6, 1).unwrap(), big(480));
        assert_eq!(t_term(6, 2).unwrap(), big(960));
        assert_eq!(t_term(4, 1).unwrap(), big(8));
        assert!(term_ratio_check(6, 1).unwrap());
        assert!(term_ratio_check(5, 1).unwrap());
        assert!(term_ratio_check(5, 2).unwrap());
        assert!(term_ratio_check(5, 3).is_err());
        assert!(term_ratio_check(5, 0).is_err());
        for n in 4..=50 {
            for i in 1..=n - 3 {
                assert!(term_ratio_check(n, i).unwrap(), "n={n} i={i}");
            }
        }
    }

    #[test]
    fn s_k_examples() {
        assert_eq!(s_k_closed(5, 3).unwrap(), big(144));
        assert_eq!(s_k_direct(5, 3).unwrap(), big(144));
        assert_eq!(s_k_closed(6, 2).unwrap(), big(480));
        assert_eq!(s_k_direct(4, 2).unwrap(), big(8));
        assert_eq!(s_k_closed(4, 2).unwrap(), big(8));
        assert!(s_k_closed(6, 1).is_err());
        assert!(s_k_closed(6, 5).is_err());
        assert!(s_k_direct(3, 2).is_err());
    }

    #[test]
    fn closed_form_telescopes() {
        let cert = HypergeometricCertificate::for_leaf_distance();
        for n in 4..=60 {
            assert_eq!(s2_value(n).unwrap(), s_k_direct(n, 2).unwrap());
            assert_eq!(
                boundary_constant_from_s2(n).unwrap(),
                boundary_constant(n).unwrap()
            );
            for k in 2..=n - 2 {
                let closed = s_k_closed(n, k).unwrap();
                assert_eq!(closed, s_k_direct(n, k).unwrap(), "n={n} k={k}");
                assert_eq!(
                    cert.telescoped_sum(n, k).unwrap(),
                    BigRatio::from_integer(closed.into())
                );
            }
        }
    }

    #[test]
    fn index_shift_bookkeeping() {
        for n in 4..=40 {
            for k in 1..n {
                let expected = cumulative_fraction(n, k).unwrap();
                assert_eq!(cumulative_unshifted(n, k).unwrap(), expected, "n={n} k={k}");
                if (2..=n - 2).contains(&k) {
                    assert_eq!(cumulative_from_s_k(n, k).unwrap(), expected, "n={n} k={k}");
                }
            }
        }
    }
}
