//! Enumeration and memory bounds, held per thread.

use std::cell::Cell;

use crate::{Error, Result};

/// Default bound on group elements enumerated in one orbit scan (10!).
pub const DEFAULT_ENUMERATION_LIMIT: u64 = 3_628_800;
/// Default bound on dense tensor entries (2^24).
pub const DEFAULT_TENSOR_LIMIT: u64 = 1 << 24;

thread_local! {
    static ENUMERATION_LIMIT: Cell<u64> = const { Cell::new(DEFAULT_ENUMERATION_LIMIT) };
    static TENSOR_LIMIT: Cell<u64> = const { Cell::new(DEFAULT_TENSOR_LIMIT) };
}

pub fn enumeration_limit() -> u64 {
    ENUMERATION_LIMIT.get()
}

/// Sets the bound for computations on the current thread.
pub fn set_enumeration_limit(limit: u64) {
    ENUMERATION_LIMIT.set(limit.max(1));
}

pub fn tensor_limit() -> u64 {
    TENSOR_LIMIT.get()
}

/// Sets the bound for computations on the current thread.
pub fn set_tensor_limit(limit: u64) {
    TENSOR_LIMIT.set(limit.max(1));
}

pub(crate) fn check_enumeration(needed: u128) -> Result<()> {
    let limit = enumeration_limit() as u128;
    if needed > limit {
        return Err(Error::LimitExceeded { what: "enumeration size", needed, limit });
    }
    Ok(())
}

pub(crate) fn check_tensor(needed: u128) -> Result<()> {
    let limit = tensor_limit() as u128;
    if needed > limit {
        return Err(Error::LimitExceeded { what: "tensor entries", needed, limit });
    }
    Ok(())
}

pub(crate) fn factorial(n: usize) -> u128 {
    (1..=n as u128).fold(1u128, |acc, k| acc.saturating_mul(k))
}
