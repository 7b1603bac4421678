//! Sequential / data-parallel execution switch.
//!
//! With the `parallel` feature (on by default) the batch loops in this crate
//! run on the rayon global pool. Without it, or when [`ExecMode::Sequential`]
//! is requested, they run on the calling thread. Results are exact, so both
//! modes return identical values.

/// How batch work is scheduled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ExecMode {
    Sequential,
    /// Uses rayon when the `parallel` feature is enabled; otherwise the same
    /// as `Sequential`.
    #[default]
    Parallel,
}

impl ExecMode {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == ExecMode::Parallel
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map_collect<T, R, F>(mode: ExecMode, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = mode;
    items.iter().map(f).collect()
}

/// Folds `f(i)` over `lo..hi` with an associative, commutative `combine`.
pub fn range_reduce<R, F, C>(mode: ExecMode, lo: i64, hi: i64, identity: R, f: F, combine: C) -> R
where
    R: Send + Sync + Clone,
    F: Fn(i64) -> R + Sync + Send,
    C: Fn(R, R) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        use rayon::prelude::*;
        let id = identity.clone();
        return (lo..hi)
            .into_par_iter()
            .map(&f)
            .reduce(move || id.clone(), &combine);
    }
    let _ = mode;
    (lo..hi).map(f).fold(identity, combine)
}
