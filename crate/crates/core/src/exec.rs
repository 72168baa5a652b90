//! Serial / data-parallel execution of independent index-addressed work.
//!
//! Results are always collected in index order, and any reduction over them
//! is done serially by the caller, so both modes give bitwise-identical output.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ExecMode {
    Serial,
    /// Falls back to [`ExecMode::Serial`] when built without the `parallel` feature.
    #[default]
    Parallel,
}

impl ExecMode {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == ExecMode::Parallel
    }
}

/// Evaluates `f(0..n)` and returns the results in index order.
pub fn map_indices<T, F>(n: usize, mode: ExecMode, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = mode;
    (0..n).map(f).collect()
}

/// Maps `f` over `items`, preserving order.
pub fn map_slice<A, T, F>(items: &[A], mode: ExecMode, f: F) -> Vec<T>
where
    A: Sync,
    T: Send,
    F: Fn(&A) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = mode;
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree_and_keep_order() {
        let serial = map_indices(1000, ExecMode::Serial, |i| (i as f64).sqrt());
        let parallel = map_indices(1000, ExecMode::Parallel, |i| (i as f64).sqrt());
        assert_eq!(serial, parallel);
        assert_eq!(serial[49], 7.0);

        let xs: Vec<u32> = (0..257).collect();
        assert_eq!(
            map_slice(&xs, ExecMode::Parallel, |x| x * 2),
            map_slice(&xs, ExecMode::Serial, |x| x * 2)
        );
    }

    #[test]
    fn empty_input() {
        assert!(map_indices(0, ExecMode::Parallel, |i| i).is_empty());
    }
}
