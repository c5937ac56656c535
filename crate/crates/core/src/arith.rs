//! Big-integer helpers: factorials, double factorials and range products.

use num_bigint::BigUint;
use num_traits::One;

/// Product of the integers in `lo..=hi`. Empty ranges give 1.
pub fn range_product(lo: u64, hi: u64) -> BigUint {
    if lo > hi {
        return BigUint::one();
    }
    // Binary splitting keeps the operands balanced.
    if hi - lo < 16 {
        let mut acc = BigUint::one();
        for v in lo..=hi {
            acc *= v;
        }
        return acc;
    }
    let mid = lo + (hi - lo) / 2;
    range_product(lo, mid) * range_product(mid + 1, hi)
}

pub fn factorial(m: u64) -> BigUint {
    range_product(2, m)
}

/// `m!! = m (m-2) (m-4) ...`, with `0!! = 1!! = 1`.
pub fn double_factorial(m: u64) -> BigUint {
    if m < 2 {
        return BigUint::one();
    }
    let terms = m / 2 + m % 2;
    stepped_product(m, terms)
}

fn stepped_product(top: u64, terms: u64) -> BigUint {
    if terms <= 16 {
        let mut acc = BigUint::one();
        for t in 0..terms {
            let v = top - 2 * t;
            if v > 1 {
                acc *= v;
            }
        }
        return acc;
    }
    let half = terms / 2;
    stepped_product(top, half) * stepped_product(top - 2 * half, terms - half)
}

pub fn pow2(e: u64) -> BigUint {
    BigUint::one() << e
}
