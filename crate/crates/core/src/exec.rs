//! Serial and data-parallel execution of the inner loops.
//!
//! With the `parallel` feature (on by default) the heavy loops run on the
//! rayon pool. Without it every [`Execution`] degrades to a plain loop.
//! Results are identical either way: work items are indexed, outputs are
//! collected in index order, and reductions are order-independent maxima.

/// How an inner loop is executed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Execution {
    Serial,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Serial
        }
    }
}

impl Execution {
    /// True when this build can actually run work in parallel.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// `(0..n).map(f).collect()`, in index order.
pub(crate) fn map_indexed<T, F>(exec: Execution, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

/// `max_i f(items[i])`, or `-inf` for an empty slice.
pub(crate) fn max_over<T, F>(exec: Execution, items: &[T], f: F) -> f64
where
    T: Sync,
    F: Fn(&T) -> f64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).reduce(|| f64::NEG_INFINITY, f64::max);
    }
    let _ = exec;
    items.iter().map(f).fold(f64::NEG_INFINITY, f64::max)
}
