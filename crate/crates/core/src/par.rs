//! Tiny dispatch layer between rayon and plain iteration. With the
//! `parallel` feature (default) the range maps run on the rayon pool;
//! without it the same call sites fall back to sequential loops.

#[cfg(feature = "parallel")]
pub fn map_range<T: Send>(n: usize, f: impl Fn(usize) -> T + Sync) -> Vec<T> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_range<T>(n: usize, f: impl Fn(usize) -> T) -> Vec<T> {
    (0..n).map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_items<I: Copy + Send + Sync, T: Send>(
    items: &[I],
    f: impl Fn(I) -> T + Sync,
) -> Vec<T> {
    use rayon::prelude::*;
    items.par_iter().map(|&i| f(i)).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_items<I: Copy, T>(items: &[I], f: impl Fn(I) -> T) -> Vec<T> {
    items.iter().map(|&i| f(i)).collect()
}
