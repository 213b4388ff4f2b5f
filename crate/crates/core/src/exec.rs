//! Data-parallel helpers over index ranges.
//!
//! With the `parallel` feature (on by default) work is spread over the rayon
//! pool; without it, or when [`Execution::Sequential`] is requested, the same
//! closures run in order on the calling thread. Both paths produce identical
//! results: the reductions used here are exact and associative.

use crate::error::Result;
use crate::padic::{PAdicContext, PAdicScalar};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Falls back to sequential when built without the `parallel` feature.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

#[cfg(feature = "parallel")]
const MIN_CHUNK: usize = 256;

/// `f(0), ..., f(len - 1)` in index order.
pub fn try_map<T, F>(len: u64, exec: Execution, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..len as usize)
            .into_par_iter()
            .with_min_len(MIN_CHUNK)
            .map(|i| f(i as u64))
            .collect(),
        _ => (0..len).map(f).collect(),
    }
}

/// Exact sum of `f(0) + ... + f(len - 1)`.
pub fn try_sum<F>(ctx: &PAdicContext, len: u64, exec: Execution, f: F) -> Result<PAdicScalar>
where
    F: Fn(u64) -> Result<PAdicScalar> + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..len as usize)
            .into_par_iter()
            .with_min_len(MIN_CHUNK)
            .map(|i| f(i as u64))
            .try_reduce(|| ctx.zero(), |a, b| a.try_add(&b)),
        _ => (0..len).try_fold(ctx.zero(), |acc, i| acc.try_add(&f(i)?)),
    }
}

/// Alternating sum `sum_x (-1)^x f(x)` over `0..len`.
pub fn try_alternating_sum<F>(
    ctx: &PAdicContext,
    len: u64,
    exec: Execution,
    f: F,
) -> Result<PAdicScalar>
where
    F: Fn(u64) -> Result<PAdicScalar> + Sync + Send,
{
    try_sum(ctx, len, exec, |x| Ok(f(x)?.signed(x)))
}
