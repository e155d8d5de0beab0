use rayon::prelude::*;

use crate::{Error, Result};

/// Evaluates `job(0..count)` on `workers` threads and returns the results in
/// index order. The first error aborts the remaining work.
pub fn run_indexed<T, F>(workers: usize, count: usize, job: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    if workers <= 1 {
        return (0..count).map(job).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start {workers} workers: {e}")))?;
    pool.install(|| (0..count).into_par_iter().map(&job).collect())
}
