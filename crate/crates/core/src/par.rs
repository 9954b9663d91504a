//! Order-preserving map over a batch of independent instances.
//!
//! With the `parallel` feature the work is spread over rayon workers; the
//! environment variable `BOTTBORD_THREADS` caps the worker count. Without the
//! feature every batch runs on the calling thread.

#[cfg(feature = "parallel")]
use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
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

pub const THREADS_ENV: &str = "BOTTBORD_THREADS";

#[cfg(feature = "parallel")]
fn capped_pool() -> Option<&'static rayon::ThreadPool> {
    static POOL: OnceLock<Option<rayon::ThreadPool>> = OnceLock::new();
    POOL.get_or_init(|| {
        let threads = std::env::var(THREADS_ENV).ok()?.trim().parse::<usize>().ok()?;
        if threads == 0 {
            return None;
        }
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().ok()
    })
    .as_ref()
}

/// `items.iter().map(f)` with results in input order.
pub fn map_ordered<T, R, F>(items: &[T], exec: Execution, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        Execution::Sequential => items.iter().map(f).collect(),
        Execution::Parallel => parallel_map(items, f),
    }
}

#[cfg(feature = "parallel")]
fn parallel_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    let run = || items.par_iter().map(&f).collect();
    match capped_pool() {
        Some(pool) => pool.install(run),
        None => run(),
    }
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keeps_input_order() {
        let items: Vec<u64> = (0..1000).collect();
        let seq = map_ordered(&items, Execution::Sequential, |x| x * x);
        let par = map_ordered(&items, Execution::Parallel, |x| x * x);
        assert_eq!(seq, par);
        assert_eq!(par[999], 999 * 999);
    }

    #[test]
    fn empty_batch() {
        let out: Vec<u8> = map_ordered(&[] as &[u8], Execution::default(), |x| *x);
        assert!(out.is_empty());
    }
}
