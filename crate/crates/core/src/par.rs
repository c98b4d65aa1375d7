//! Index-parallel map with a sequential fallback.
//!
//! With the `parallel` feature (default) work is spread over the rayon thread pool;
//! without it, or through [`map_sequential`], items are processed in order. Results are
//! always returned in index order, so output does not depend on scheduling.

/// Applies `f` to `0..n`, in parallel when the `parallel` feature is enabled.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_sequential(n, f)
    }
}

pub fn map_sequential<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let a = map_indexed(100, |i| i * i);
        let b = map_sequential(100, |i| i * i);
        assert_eq!(a, b);
    }
}
