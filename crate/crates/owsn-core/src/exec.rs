//! Execution-mode plumbing: data-parallel fan-out with a sequential fallback.
//!
//! Simulation slots and crossover-grid cells are embarrassingly parallel.
//! With the `parallel` feature (default) they fan out over a rayon pool;
//! without it, or with [`ExecMode::Sequential`], they run in order on the
//! calling thread. Results are always returned in input order, so the two
//! modes are bit-identical.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How to run an independent batch of work items.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExecMode {
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel,
}

impl Default for ExecMode {
    #[cfg(feature = "parallel")]
    fn default() -> Self {
        ExecMode::Parallel
    }
    #[cfg(not(feature = "parallel"))]
    fn default() -> Self {
        ExecMode::Sequential
    }
}

/// Maps `f` over `0..n`, preserving index order in the output.
pub fn map_indexed<T, F>(n: usize, mode: ExecMode, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    match mode {
        ExecMode::Sequential => (0..n).map(f).collect(),
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => (0..n).into_par_iter().map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sequential_preserves_order() {
        let v = map_indexed(5, ExecMode::Sequential, |i| i * i);
        assert_eq!(v, vec![0, 1, 4, 9, 16]);
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_matches_sequential() {
        let s = map_indexed(1000, ExecMode::Sequential, |i| (i as f64).sqrt());
        let p = map_indexed(1000, ExecMode::Parallel, |i| (i as f64).sqrt());
        assert_eq!(s, p);
    }
}
