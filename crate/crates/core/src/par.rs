//! Order-preserving data parallelism, sequential without the `parallel` feature.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Applies `f` to consecutive blocks of `0..n`; results come back in block order.
pub(crate) fn map_blocks<T, F>(n: u64, block: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<u64>) -> T + Sync + Send,
{
    let block = block.max(1);
    let blocks = n.div_ceil(block);
    let run = |b: u64| f(b * block..((b + 1) * block).min(n));
    #[cfg(feature = "parallel")]
    {
        (0..blocks).into_par_iter().map(run).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..blocks).map(run).collect()
    }
}

/// `items.iter().map(f)`, in parallel when available, preserving order.
pub(crate) fn map_items<I, T, F>(items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}
