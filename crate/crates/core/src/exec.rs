//! Deterministic chunked execution of independent jobs.
//!
//! Work is divided into contiguous chunks of a fixed size and the outputs
//! are merged back in chunk order, so the combined result is identical for
//! any worker count. With the `parallel` feature (default) chunks run on a
//! rayon pool sized to `workers`; without it, or with `workers <= 1`,
//! everything runs on the calling thread. A chunk boundary is a resumable
//! offset: jobs receive `[start, end)` index ranges and nothing else.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Default number of items per chunk.
pub const DEFAULT_CHUNK_SIZE: u64 = 64;

/// Workers to use when the caller does not say: the available parallelism.
pub fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map(|p| p.get())
        .unwrap_or(1)
}

/// Run `job` over `[0, total)` in chunks of `chunk_size` and concatenate the
/// per-chunk outputs in chunk order.
pub fn run_chunked<T, F>(total: u64, chunk_size: u64, workers: usize, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, u64) -> Vec<T> + Sync,
{
    assert!(chunk_size > 0, "chunk size must be positive");
    if total == 0 {
        return Vec::new();
    }
    let chunks = total.div_ceil(chunk_size);
    let range = |c: u64| (c * chunk_size, ((c + 1) * chunk_size).min(total));

    #[cfg(feature = "parallel")]
    if workers > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("failed to build worker pool");
        let per_chunk: Vec<Vec<T>> = pool.install(|| {
            (0..chunks)
                .into_par_iter()
                .map(|c| {
                    let (start, end) = range(c);
                    job(start, end)
                })
                .collect()
        });
        return per_chunk.into_iter().flatten().collect();
    }

    let _ = workers;
    let mut out = Vec::new();
    for c in 0..chunks {
        let (start, end) = range(c);
        out.extend(job(start, end));
    }
    out
}
