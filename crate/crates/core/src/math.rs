//! Small exact integer helpers shared by the other modules.

use crate::{Error, Result};

/// `n choose k`, or `None` if the result does not fit in a `u64`.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) is exact at every step.
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return None;
        }
    }
    Some(acc as u64)
}

pub(crate) fn binomial_checked(n: u64, k: u64, what: &'static str) -> Result<u64> {
    binomial(n, k).ok_or(Error::Overflow(what))
}

pub fn factorial(n: u64) -> Option<u64> {
    (1..=n).try_fold(1u64, |acc, i| acc.checked_mul(i))
}

/// `base^exp` in `i64`, with overflow reported instead of wrapped.
pub(crate) fn pow_checked(base: i64, exp: u32, what: &'static str) -> Result<i64> {
    base.checked_pow(exp).ok_or(Error::Overflow(what))
}

/// `ceil(log2(v))` for `v >= 1`.
pub fn ceil_log2(v: u64) -> u32 {
    debug_assert!(v >= 1);
    if v <= 1 {
        0
    } else {
        64 - (v - 1).leading_zeros()
    }
}
