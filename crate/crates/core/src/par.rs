//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) [`Strategy::Parallel`] runs on the
//! rayon global pool; without it every strategy runs sequentially. Results are
//! always returned in input order, so output never depends on the strategy.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    Sequential,
    #[default]
    Parallel,
}

impl Strategy {
    /// Whether this strategy actually fans out in the current build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Strategy::Parallel
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map<T, R, F>(strategy: Strategy, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = strategy;
    items.iter().map(f).collect()
}

/// Maps a fallible `f` over `items`, returning the first error in input order.
pub fn try_map<T, R, E, F>(strategy: Strategy, items: &[T], f: F) -> Result<Vec<R>, E>
where
    T: Sync,
    R: Send,
    E: Send,
    F: Fn(&T) -> Result<R, E> + Sync + Send,
{
    map(strategy, items, f).into_iter().collect()
}
