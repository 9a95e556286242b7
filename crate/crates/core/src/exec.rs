//! Execution strategy for the data-parallel kernels.
//!
//! With the `parallel` feature (on by default) kernels fan out over rayon's
//! global pool; without it only [`Exec::Sequential`] exists. Results never
//! depend on the strategy: parallel folds merge into exact-keyed collections
//! and every public output is sorted afterwards.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

impl Exec {
    /// Fold over `0..n`, merging partial accumulators with `reduce`.
    pub(crate) fn fold_indices<Acc, I, F, R>(self, n: usize, identity: I, fold: F, reduce: R) -> Acc
    where
        Acc: Send,
        I: Fn() -> Acc + Sync + Send,
        F: Fn(Acc, usize) -> Acc + Sync + Send,
        R: Fn(Acc, Acc) -> Acc + Sync + Send,
    {
        match self {
            Exec::Sequential => {
                let _ = &reduce;
                (0..n).fold(identity(), fold)
            }
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..n).into_par_iter().fold(&identity, &fold).reduce(&identity, &reduce),
        }
    }

    /// Map over a slice, preserving order.
    pub(crate) fn map_slice<T, U, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        match self {
            Exec::Sequential => items.iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().map(f).collect(),
        }
    }
}
