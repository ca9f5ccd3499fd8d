//! Data-parallel helpers with a sequential fallback.
//!
//! Per-point work (frame assembly, Harnack sweeps, pairwise diameter scans)
//! is embarrassingly parallel, but reports must be bit-identical no matter
//! how many workers run. Every helper here therefore produces its output in
//! index order and leaves all reductions to a sequential fold on the caller
//! side; rayon only distributes the map.
//!
//! Disabling the `parallel` feature swaps in plain iterators with the same
//! results, which is what the criterion baseline comparison in `benches/`
//! measures.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `0..n` and collects results in index order.
#[cfg(feature = "parallel")]
pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    F: Fn(usize) -> R,
{
    (0..n).map(f).collect()
}

/// Maps `f` over a slice and collects results in slice order.
#[cfg(feature = "parallel")]
pub fn map_slice<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_slice<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// True when this build distributes work across a rayon pool.
pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

/// Caps the worker pool at `n` threads (first call wins). Returns false if
/// the pool was already built or this is a sequential build.
#[cfg(feature = "parallel")]
pub fn configure_threads(n: usize) -> bool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .is_ok()
}

#[cfg(not(feature = "parallel"))]
pub fn configure_threads(_n: usize) -> bool {
    false
}
