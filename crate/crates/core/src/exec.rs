use alloc::vec::Vec;

/// Runs one independent job per path index and returns results in index order.
///
/// Implementations may evaluate jobs concurrently, but the output order must be
/// `0..n` so that downstream reductions are independent of scheduling.
pub trait PathExecutor {
    fn map_indexed<T, F>(&self, n: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Single-threaded executor.
#[derive(Debug, Clone, Copy, Default)]
pub struct Serial;

impl PathExecutor for Serial {
    fn map_indexed<T, F>(&self, n: usize, job: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..n).map(job).collect()
    }
}
