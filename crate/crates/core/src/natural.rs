//! Arbitrary-precision nonnegative integers.

pub use num_bigint::BigUint as Natural;
use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Dyadic valuation: the largest `j` with `2^j | u`.
pub fn val2(u: &BigUint) -> Result<u64> {
    u.trailing_zeros().ok_or(Error::ZeroInput)
}

/// `⌊lg u⌋` for `u ≥ 1`.
pub fn floor_lg(u: &BigUint) -> u64 {
    u.bits().saturating_sub(1)
}

/// `⌈lg u⌉` for `u ≥ 1`.
pub fn ceil_lg(u: &BigUint) -> u64 {
    let b = u.bits();
    if b == 0 {
        return 0;
    }
    if u.trailing_zeros() == Some(b - 1) {
        b - 1
    } else {
        b
    }
}

pub fn nat(v: u64) -> Natural {
    Natural::from(v)
}
