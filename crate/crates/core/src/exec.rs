//! Data-parallel map with a sequential fallback.
//!
//! Results always come back in input order, and reductions over them are
//! done by the caller in that order, so output is bit-identical for any
//! worker count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
use crate::error::Error;
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Executor {
    Sequential,
    /// Rayon worker pool. `threads: None` uses the global pool; otherwise
    /// [`Executor::install`] runs work inside a dedicated pool of that size.
    #[cfg(feature = "parallel")]
    Parallel {
        threads: Option<usize>,
    },
}

impl Default for Executor {
    fn default() -> Self {
        Executor::with_threads(None)
    }
}

impl Executor {
    /// Picks the parallel executor when available, sequential otherwise.
    /// `Some(1)` always selects the sequential path.
    pub fn with_threads(threads: Option<usize>) -> Self {
        match threads {
            Some(1) => Executor::Sequential,
            #[cfg(feature = "parallel")]
            t => Executor::Parallel { threads: t },
            #[cfg(not(feature = "parallel"))]
            _ => Executor::Sequential,
        }
    }

    pub fn is_parallel(&self) -> bool {
        !matches!(self, Executor::Sequential)
    }

    /// Runs `op` in the pool this executor describes.
    pub fn install<R, F>(&self, op: F) -> Result<R>
    where
        F: FnOnce() -> R + Send,
        R: Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Executor::Parallel { threads: Some(n) } => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(*n)
                    .build()
                    .map_err(|e| Error::Config(format!("cannot start {n} worker threads: {e}")))?;
                Ok(pool.install(op))
            }
            _ => Ok(op()),
        }
    }

    pub fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(usize, &T) -> R + Sync + Send,
    {
        match self {
            Executor::Sequential => items.iter().enumerate().map(|(i, t)| f(i, t)).collect(),
            #[cfg(feature = "parallel")]
            Executor::Parallel { .. } => items.par_iter().enumerate().map(|(i, t)| f(i, t)).collect(),
        }
    }

    /// Like [`Executor::map`], failing with the lowest-index error.
    pub fn try_map<T, R, F>(&self, items: &[T], f: F) -> Result<Vec<R>>
    where
        T: Sync,
        R: Send,
        F: Fn(usize, &T) -> Result<R> + Sync + Send,
    {
        self.map(items, f).into_iter().collect()
    }
}
