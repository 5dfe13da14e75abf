//! Thin dispatch layer between the rayon-backed data-parallel paths and the
//! sequential fallback selected by disabling the `parallel` feature.
//!
//! All call sites collect results into a `Vec` ordered by task index and
//! reduce sequentially, so the outcome is identical under both builds and
//! under any thread count.

#[cfg(feature = "parallel")]
pub(crate) fn map_indexed<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_indexed<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..count).map(f).collect()
}

/// Sequential twin of [`map_indexed`], always available so benchmarks can
/// compare the two paths within one build.
pub(crate) fn map_indexed_seq<T, F>(count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..count).map(f).collect()
}
