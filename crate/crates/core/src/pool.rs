//! Worker pool construction shared by the renderers and sweeps.

use crate::error::{Error, Result};

/// Builds a pool with exactly `workers` threads. All parallelism in this
/// crate runs inside such a pool so callers control the thread count; the
/// rendered output never depends on it.
pub(crate) fn build_pool(workers: usize) -> Result<rayon::ThreadPool> {
    if workers == 0 {
        return Err(Error::TooSmall {
            name: "workers",
            min: 1,
            value: 0,
        });
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::WorkerPool(e.to_string()))
}
