// Thin switch between rayon and sequential iteration. Every caller reduces
// with an order-independent operation (max) or collects in index order, so
// results are identical with and without the `parallel` feature.

#[cfg(feature = "parallel")]
pub(crate) fn map_range<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..len).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_range<T, F>(len: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..len).map(f).collect()
}

/// Maximum of `f` over `0..len`; `f64::NEG_INFINITY` for an empty range.
#[cfg(feature = "parallel")]
pub(crate) fn max_range<F>(len: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    use rayon::prelude::*;
    (0..len)
        .into_par_iter()
        .map(f)
        .reduce(|| f64::NEG_INFINITY, f64::max)
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn max_range<F>(len: usize, f: F) -> f64
where
    F: Fn(usize) -> f64,
{
    (0..len).map(f).fold(f64::NEG_INFINITY, f64::max)
}
