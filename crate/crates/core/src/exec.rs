//! Data-parallel mapping with a sequential fallback.
//!
//! With the `parallel` feature (on by default) [`Execution::Parallel`] runs on
//! the rayon pool; without it every execution mode runs sequentially. Results
//! are always returned in input order.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether this mode actually runs on more than one thread in this build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

pub fn num_threads() -> usize {
    #[cfg(feature = "parallel")]
    return rayon::current_num_threads();

    #[cfg(not(feature = "parallel"))]
    return 1;
}

/// `items.iter().map(f).collect()`, possibly in parallel.
pub fn map_collect<T, R, F>(items: &[T], exec: Execution, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return items.par_iter().map(f).collect();
    }

    let _ = exec;
    items.iter().map(f).collect()
}

/// `(0..len).map(f).collect()`, possibly in parallel.
pub fn map_range<R, F>(len: usize, exec: Execution, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..len).into_par_iter().map(f).collect();
    }

    let _ = exec;
    (0..len).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let items: Vec<u64> = (0..1000).collect();
        let seq = map_collect(&items, Execution::Sequential, |x| x * x);
        let par = map_collect(&items, Execution::Parallel, |x| x * x);
        assert_eq!(seq, par);
        assert_eq!(map_range(5, Execution::Parallel, |i| i + 1), vec![1, 2, 3, 4, 5]);
    }
}
