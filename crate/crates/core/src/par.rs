//! Sequential / data-parallel execution switch.
//!
//! With the `parallel` feature (on by default) [`Execution::Parallel`] fans work
//! out over the rayon pool. Without it both modes run on the calling thread, so
//! results never depend on the mode.

/// How independent work items are evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Execution {
    Sequential,
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

impl Execution {
    /// True when this build can actually run work concurrently in this mode.
    pub fn is_concurrent(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// Maps `f` over `items`, preserving order.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel && items.len() > 1 {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Maps `f` over `0..len`, preserving order.
    pub fn map_range<R, F>(self, len: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel && len > 1 {
            use rayon::prelude::*;
            return (0..len).into_par_iter().map(f).collect();
        }
        (0..len).map(f).collect()
    }
}
